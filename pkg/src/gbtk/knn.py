"""Nearest-granular-ball classifier (no k to tune).

A query is labeled by the ball whose boundary it is closest to; the query is
treated as a zero-radius ball, so the score is ||q - c|| - r and may be
negative when the query sits inside a ball.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BallSet, Dataset
from .errors import DimensionError, EmptyModel
from .splitting import SplitConfig, filter_noise_balls, generate_classification_balls


@dataclass(frozen=True)
class GbknnModel:
    ball_set: BallSet
    dimension: int

    @property
    def centers(self) -> np.ndarray:
        return np.stack([b.center for b in self.ball_set.balls])

    @property
    def radii(self) -> np.ndarray:
        return np.array([b.radius for b in self.ball_set.balls])

    @property
    def labels(self) -> np.ndarray:
        return np.array([b.label for b in self.ball_set.balls])


def fit(dataset: Dataset, config: SplitConfig) -> GbknnModel:
    """Generate purity-threshold balls, drop singletons, and wrap the rest."""
    ball_set = generate_classification_balls(dataset, config)
    kept, _ = filter_noise_balls(ball_set)
    if len(kept) == 0:
        raise EmptyModel("all balls were singletons; nothing left to classify with")
    return GbknnModel(ball_set=kept, dimension=dataset.d)


def predict(model: GbknnModel, query) -> int:
    """Label of the nearest ball; boundary-distance ties pick the earlier ball."""
    q = np.asarray(query, dtype=float)
    if q.shape != (model.dimension,):
        raise DimensionError(f"query shape {q.shape} != ({model.dimension},)")
    scores = np.linalg.norm(model.centers - q, axis=1) - model.radii
    return int(model.labels[int(np.argmin(scores))])


def predict_many(model: GbknnModel, queries) -> np.ndarray:
    q = np.asarray(queries, dtype=float)
    if q.ndim != 2 or q.shape[1] != model.dimension:
        raise DimensionError(f"queries shape {q.shape} incompatible with d={model.dimension}")
    scores = np.linalg.norm(q[:, None, :] - model.centers[None, :, :], axis=2) - model.radii[None, :]
    return model.labels[np.argmin(scores, axis=1)]
