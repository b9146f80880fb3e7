"""Purity-driven ball generation for labeled data.

The whole dataset starts as one ball; balls below the purity threshold are
split with a small k-means (k = number of distinct labels inside the ball)
until every ball is pure enough or can no longer be divided. The result is a
partition of the row indices, so membership coverage is always 1.
"""
from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass

import numpy as np

from .core import BallSet, Dataset, GranularBall, RadiusMode, normalize_ball_order
from .errors import InvalidInput, SplitStalled

PURITY_GRID = tuple(round(0.70 + 0.05 * i, 2) for i in range(7))

LLOYD_ITERS = 10


class Splitter(enum.Enum):
    LABEL_KMEANS = "label_kmeans"
    CLASS_CENTER_SEEDED = "class_center_seeded"


@dataclass(frozen=True)
class SplitConfig:
    purity_threshold: float = 1.0
    radius_mode: RadiusMode = RadiusMode.AVERAGE
    min_ball_size: int = 1
    max_split_iters: int = 500
    seed: int = 0
    splitter: Splitter = Splitter.LABEL_KMEANS

    def __post_init__(self):
        if not 0.0 < self.purity_threshold <= 1.0:
            raise InvalidInput(f"purity threshold must be in (0, 1], got {self.purity_threshold}")
        if self.max_split_iters < 1:
            raise InvalidInput("max_split_iters must be >= 1")
        if self.min_ball_size < 1:
            raise InvalidInput("min_ball_size must be >= 1")


def _class_seeds(points: np.ndarray, labels: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """One seed index per class: the member nearest its class centroid.

    Distance ties resolve to the lowest local row index, which keeps the whole
    split deterministic.
    """
    seeds = np.empty(len(classes), dtype=int)
    for k, cls in enumerate(classes):
        local = np.flatnonzero(labels == cls)
        centroid = points[local].mean(axis=0)
        dists = np.linalg.norm(points[local] - centroid, axis=1)
        seeds[k] = local[int(np.argmin(dists))]
    return seeds


def _fix_empty_clusters(points: np.ndarray, assign: np.ndarray, k: int) -> np.ndarray:
    """Move the farthest point of the largest cluster into each empty one."""
    assign = assign.copy()
    for cluster in range(k):
        if np.any(assign == cluster):
            continue
        sizes = np.bincount(assign, minlength=k)
        donor = int(np.argmax(sizes))
        if sizes[donor] < 2:
            raise SplitStalled("no donor cluster large enough to fill an empty child")
        local = np.flatnonzero(assign == donor)
        centroid = points[local].mean(axis=0)
        dists = np.linalg.norm(points[local] - centroid, axis=1)
        assign[local[int(np.argmax(dists))]] = cluster
    return assign


def split_once(dataset: Dataset, ball: GranularBall, config: SplitConfig) -> list[GranularBall]:
    """Split one impure ball into one child per distinct label.

    LABEL_KMEANS runs a few Lloyd iterations from class-representative seeds;
    CLASS_CENTER_SEEDED does a single assignment pass against fixed per-class
    centroids. Raises SplitStalled when the partition degenerates to a single
    non-empty child.
    """
    labels_all = dataset.require_labels()
    idx = np.asarray(ball.members, dtype=int)
    points = dataset.values[idx]
    labels = labels_all[idx]
    classes = np.unique(labels)
    k = len(classes)
    if k < 2:
        raise SplitStalled("single-label ball cannot be split by label count")

    if config.splitter is Splitter.CLASS_CENTER_SEEDED:
        centers = np.stack([points[labels == cls].mean(axis=0) for cls in classes])
        dists = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
        assign = np.argmin(dists, axis=1)
    else:
        seeds = _class_seeds(points, labels, classes)
        centers = points[seeds]
        assign = None
        for _ in range(LLOYD_ITERS):
            dists = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
            new_assign = np.argmin(dists, axis=1)
            new_assign = _fix_empty_clusters(points, new_assign, k)
            if assign is not None and np.array_equal(new_assign, assign):
                break
            assign = new_assign
            centers = np.stack([points[assign == c].mean(axis=0) for c in range(k)])

    assign = _fix_empty_clusters(points, assign, k)
    children = [idx[assign == c] for c in range(k)]
    if sum(1 for ch in children if len(ch) > 0) < 2:
        raise SplitStalled("assignment collapsed onto one child")
    return [GranularBall.from_members(dataset, ch, config.radius_mode)
            for ch in children if len(ch) > 0]


def generate_classification_balls(dataset: Dataset, config: SplitConfig) -> BallSet:
    """Coarse-to-fine purity-threshold splitting over the whole dataset.

    Balls are processed largest-first. A ball is final once its purity meets
    the threshold, it is too small to split, or a split makes no progress.
    """
    dataset.require_labels()
    root = GranularBall.from_members(dataset, range(dataset.n), config.radius_mode)
    final: list[GranularBall] = []
    heap: list[tuple[int, int, GranularBall]] = []
    counter = 0
    heapq.heappush(heap, (-root.size, counter, root))
    iters = 0
    while heap:
        _, _, ball = heapq.heappop(heap)
        if (ball.purity >= config.purity_threshold
                or ball.size <= config.min_ball_size
                or iters >= config.max_split_iters):
            final.append(ball)
            continue
        try:
            children = split_once(dataset, ball, config)
        except SplitStalled:
            final.append(ball)
            continue
        iters += 1
        for child in children:
            counter += 1
            heapq.heappush(heap, (-child.size, counter, child))
    return BallSet(
        balls=normalize_ball_order(final),
        source_n=dataset.n,
        radius_mode=config.radius_mode,
        purity_threshold=config.purity_threshold,
        seed=config.seed,
    )


def filter_noise_balls(ball_set: BallSet) -> tuple[BallSet, list[GranularBall]]:
    """Drop singleton balls (isolated points are treated as label noise)."""
    kept = [b for b in ball_set.balls if not b.is_singleton]
    removed = [b for b in ball_set.balls if b.is_singleton]
    filtered = BallSet(
        balls=tuple(kept),
        source_n=ball_set.source_n,
        radius_mode=ball_set.radius_mode,
        purity_threshold=ball_set.purity_threshold,
        seed=ball_set.seed,
    )
    return filtered, removed


def adaptive_purity_search(dataset: Dataset, config: SplitConfig, validator) -> float:
    """Pick the purity threshold from a fixed grid by validator score.

    ``validator`` maps a BallSet to a real score; larger is better. Score
    ties resolve toward the larger threshold.
    """
    best_t = None
    best_score = None
    for t in PURITY_GRID:
        cfg = SplitConfig(
            purity_threshold=t,
            radius_mode=config.radius_mode,
            min_ball_size=config.min_ball_size,
            max_split_iters=config.max_split_iters,
            seed=config.seed,
            splitter=config.splitter,
        )
        score = validator(generate_classification_balls(dataset, cfg))
        if best_score is None or score >= best_score:
            best_score = score
            best_t = t
    return best_t
