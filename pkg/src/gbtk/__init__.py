"""Granular-ball computing toolkit.

Summarizes datasets by hyper-balls (centroid + radius) and runs
classification, clustering, attribute reduction, and derivative-free
optimization on the balls instead of the raw points.
"""
from .core import BallSet, Dataset, GranularBall, RadiusMode, ball_distance, coverage
from .splitting import SplitConfig, Splitter, generate_classification_balls
from .errors import GbtkError

__all__ = [
    "BallSet",
    "Dataset",
    "GranularBall",
    "RadiusMode",
    "SplitConfig",
    "Splitter",
    "GbtkError",
    "ball_distance",
    "coverage",
    "generate_classification_balls",
]

__version__ = "0.1.0"
