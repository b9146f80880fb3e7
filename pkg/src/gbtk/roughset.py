"""Granular-ball attribute reduction.

The positive region of an attribute subset is the set of samples that land
in non-singleton, fully pure balls when balls are generated on just those
columns. Its share of the dataset is the dependency degree; greedy forward
selection adds whichever attribute raises it most until the gain dries up
or the full-attribute dependency is matched within tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset
from .errors import InvalidInput
from .splitting import SplitConfig, generate_classification_balls


@dataclass(frozen=True)
class ReductResult:
    selected: tuple[int, ...]
    gamma_history: tuple[tuple[int, float], ...]
    gamma_full: float


def positive_region(dataset: Dataset, attributes, config: SplitConfig | None = None) -> np.ndarray:
    """Sorted sample indices covered by pure, non-singleton balls.

    Ball generation runs at purity threshold 1 on the projected columns;
    singleton balls are excluded because a lone sample separates trivially
    and says nothing about the attributes' discriminating power.
    """
    dataset.require_labels()
    projected = dataset.project(attributes)
    cfg = config or SplitConfig(purity_threshold=1.0)
    if cfg.purity_threshold != 1.0:
        raise InvalidInput("positive region is defined at purity threshold 1")
    ball_set = generate_classification_balls(projected, cfg)
    covered: list[int] = []
    for ball in ball_set.balls:
        if not ball.is_singleton and ball.purity == 1.0:
            covered.extend(ball.members)
    return np.asarray(sorted(covered), dtype=int)


def dependency_degree(dataset: Dataset, attributes, config: SplitConfig | None = None) -> float:
    """|positive region| / n for the given attribute subset."""
    return positive_region(dataset, attributes, config).size / dataset.n


def greedy_reduct(dataset: Dataset, epsilon: float = 0.0,
                  config: SplitConfig | None = None) -> ReductResult:
    """Forward selection of attributes by dependency-degree gain.

    Each round adds the attribute with the largest gain, breaking ties
    toward the lowest attribute index. Selection stops when the best gain
    is <= epsilon or the running dependency reaches the full-attribute
    value minus epsilon.
    """
    if epsilon < 0:
        raise InvalidInput("epsilon must be >= 0")
    dataset.require_labels()
    all_attrs = list(range(dataset.d))
    gamma_full = dependency_degree(dataset, all_attrs, config)

    selected: list[int] = []
    history: list[tuple[int, float]] = []
    current = 0.0
    remaining = list(all_attrs)
    while remaining and current < gamma_full - epsilon:
        best_attr = None
        best_gamma = None
        for attr in remaining:
            g = dependency_degree(dataset, selected + [attr], config)
            if best_gamma is None or g > best_gamma:
                best_gamma = g
                best_attr = attr
        if best_gamma - current <= epsilon:
            break
        selected.append(best_attr)
        remaining.remove(best_attr)
        history.append((best_attr, best_gamma))
        current = best_gamma
    return ReductResult(
        selected=tuple(selected),
        gamma_history=tuple(history),
        gamma_full=gamma_full,
    )
