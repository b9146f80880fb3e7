"""Core geometry: datasets, granular balls, ball sets, and their derived statistics.

A granular ball summarizes a subset of dataset rows by its centroid and a
radius (average or maximum member-to-center distance). Every other module
consumes these types; nothing here mutates after construction.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidBall, MissingLabels


class RadiusMode(enum.Enum):
    AVERAGE = "average"
    MAXIMUM = "maximum"


@dataclass(frozen=True)
class Dataset:
    """Row-major numeric matrix with optional dense integer labels.

    ``values`` is an (n, d) float array of finite values. ``labels``, when
    present, holds one integer >= 0 per row. Member indices everywhere in the
    toolkit refer to rows of this matrix.
    """

    values: np.ndarray
    labels: np.ndarray | None = None
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise InvalidBall(f"dataset must be a non-empty 2-D matrix, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidBall("dataset contains non-finite values")
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int)
            if labels.shape != (values.shape[0],):
                raise InvalidBall(f"labels length {labels.shape} does not match n={values.shape[0]}")
            if np.any(labels < 0):
                raise InvalidBall("labels must be >= 0")
            object.__setattr__(self, "labels", labels)
        if self.feature_names is not None and len(self.feature_names) != values.shape[1]:
            raise InvalidBall("feature_names length does not match d")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def require_labels(self) -> np.ndarray:
        if self.labels is None:
            raise MissingLabels("operation requires a labeled dataset")
        return self.labels

    def project(self, attributes) -> "Dataset":
        """Dataset restricted to the given feature columns (labels kept)."""
        attrs = list(attributes)
        if not attrs:
            raise InvalidBall("attribute list must be non-empty")
        names = None
        if self.feature_names is not None:
            names = tuple(self.feature_names[a] for a in attrs)
        return Dataset(self.values[:, attrs], self.labels, names)


def compute_center(dataset: Dataset, members) -> np.ndarray:
    """Component-wise mean of the member rows."""
    idx = np.asarray(members, dtype=int)
    if idx.size == 0:
        raise InvalidBall("cannot compute the center of an empty member list")
    return dataset.values[idx].mean(axis=0)


def compute_radius(dataset: Dataset, members, center: np.ndarray,
                   mode: RadiusMode = RadiusMode.AVERAGE) -> float:
    """Mean (or max) Euclidean distance from members to the given center."""
    idx = np.asarray(members, dtype=int)
    if idx.size == 0:
        raise InvalidBall("cannot compute the radius of an empty member list")
    dists = np.linalg.norm(dataset.values[idx] - center, axis=1)
    if mode is RadiusMode.MAXIMUM:
        return float(dists.max())
    return float(dists.mean())


def purity(dataset: Dataset, members) -> tuple[float, int]:
    """Majority-label share among members and the majority label itself.

    Ties on the count are broken toward the smallest label id, so the output
    is deterministic regardless of member order.
    """
    labels = dataset.require_labels()
    idx = np.asarray(members, dtype=int)
    if idx.size == 0:
        raise InvalidBall("cannot compute purity of an empty member list")
    counts = Counter(labels[idx].tolist())
    best_label = min(counts, key=lambda lab: (-counts[lab], lab))
    return counts[best_label] / idx.size, int(best_label)


@dataclass(frozen=True)
class GranularBall:
    """An immutable hyper-ball over a subset of dataset rows.

    Center, radius, purity, and label are cached at construction; rebuild the
    ball instead of mutating it.
    """

    members: tuple[int, ...]
    center: np.ndarray
    radius: float
    radius_mode: RadiusMode
    label: int | None = None
    purity: float | None = None

    @classmethod
    def from_members(cls, dataset: Dataset, members,
                     radius_mode: RadiusMode = RadiusMode.AVERAGE) -> "GranularBall":
        idx = sorted(set(int(m) for m in members))
        if not idx:
            raise InvalidBall("a granular ball needs at least one member")
        if idx[0] < 0 or idx[-1] >= dataset.n:
            raise InvalidBall(f"member index out of range for n={dataset.n}")
        center = compute_center(dataset, idx)
        radius = compute_radius(dataset, idx, center, radius_mode)
        label = None
        pur = None
        if dataset.is_labeled:
            pur, label = purity(dataset, idx)
        return cls(tuple(idx), center, radius, radius_mode, label, pur)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_singleton(self) -> bool:
        return len(self.members) == 1

    def boundary_distance(self, point: np.ndarray) -> float:
        """Signed distance from a query point to the ball boundary."""
        point = np.asarray(point, dtype=float)
        if point.shape != self.center.shape:
            raise DimensionError(f"query dimension {point.shape} != ball dimension {self.center.shape}")
        return float(np.linalg.norm(point - self.center)) - self.radius


def ball_distance(a: GranularBall, b: GranularBall) -> float:
    """Boundary separation ||c_a - c_b|| - r_a - r_b; negative when overlapping."""
    if a.center.shape != b.center.shape:
        raise DimensionError("balls live in different dimensions")
    return float(np.linalg.norm(a.center - b.center)) - a.radius - b.radius


@dataclass(frozen=True)
class BallSet:
    """A covering of a dataset by disjoint granular balls, plus provenance."""

    balls: tuple[GranularBall, ...]
    source_n: int
    radius_mode: RadiusMode
    purity_threshold: float | None = None
    seed: int = 0

    def __post_init__(self):
        seen: set[int] = set()
        for ball in self.balls:
            for m in ball.members:
                if m in seen:
                    raise InvalidBall(f"member {m} appears in more than one ball")
                seen.add(m)

    def __len__(self) -> int:
        return len(self.balls)

    @property
    def covered_count(self) -> int:
        return sum(b.size for b in self.balls)


def coverage(ball_set: BallSet) -> float:
    """Fraction of source rows assigned to some ball."""
    return ball_set.covered_count / ball_set.source_n


def normalize_ball_order(balls) -> tuple[GranularBall, ...]:
    """Canonical ball order: ascending by smallest member index."""
    return tuple(sorted(balls, key=lambda b: b.members[0]))
