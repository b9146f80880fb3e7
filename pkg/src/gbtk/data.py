"""Dataset ingestion, synthetic fixtures, label noise, and metrics.

All randomness is driven by explicit integer seeds through local
``numpy.random.Generator`` instances; nothing touches global RNG state, so
any function called twice with the same arguments returns identical arrays.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import comb

from .core import Dataset
from .errors import EmptyFile, InvalidInput, MissingLabels, ParseError, RaggedRows
from .serialize import format_float, sha256_text

NOISE = -1

SYNTHETIC_KINDS = ("blobs", "two_moons", "fourclass_like", "spirals")


@dataclass(frozen=True)
class CsvLoadResult:
    dataset: Dataset
    label_mapping: tuple[tuple[str, int], ...]  # (original token, dense id)
    header: tuple[str, ...] | None


def load_csv(path: str, has_header: bool = True,
             label_column: int | None = None) -> CsvLoadResult:
    """Parse a rectangular numeric CSV into a Dataset.

    ``label_column`` (0-based, negatives count from the end) marks the label
    field; label tokens are mapped to dense ids 0..L-1 in sorted token order
    (numeric tokens sort numerically) and the mapping is reported back.
    Parse failures carry a 1-based line and column.
    """
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    rows = [(lineno, row) for lineno, row in enumerate(rows, start=1)
            if any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyFile(f"{path} contains no data rows")

    header: tuple[str, ...] | None = None
    if has_header:
        header = tuple(cell.strip() for cell in rows[0][1])
        rows = rows[1:]
        if not rows:
            raise EmptyFile(f"{path} contains a header but no data rows")

    width = len(rows[0][1])
    for lineno, row in rows:
        if len(row) != width:
            raise RaggedRows(
                f"line {lineno}: expected {width} fields, found {len(row)}"
            )
    if header is not None and len(header) != width:
        raise RaggedRows(f"header has {len(header)} fields but rows have {width}")

    label_idx = None
    if label_column is not None:
        label_idx = label_column if label_column >= 0 else width + label_column
        if not 0 <= label_idx < width:
            raise InvalidInput(f"label column {label_column} out of range for width {width}")

    values = np.empty((len(rows), width - (1 if label_idx is not None else 0)))
    raw_labels: list[str] = []
    for r, (lineno, row) in enumerate(rows):
        c_out = 0
        for c, cell in enumerate(row):
            token = cell.strip()
            if c == label_idx:
                raw_labels.append(token)
                continue
            try:
                values[r, c_out] = float(token)
            except ValueError:
                raise ParseError(lineno, c + 1, f"cannot parse {token!r} as a number") from None
            if not np.isfinite(values[r, c_out]):
                raise ParseError(lineno, c + 1, f"non-finite value {token!r}")
            c_out += 1

    labels = None
    mapping: tuple[tuple[str, int], ...] = ()
    if label_idx is not None:
        def sort_key(token: str):
            try:
                return (0, float(token), token)
            except ValueError:
                return (1, 0.0, token)

        distinct = sorted(set(raw_labels), key=sort_key)
        by_token = {token: i for i, token in enumerate(distinct)}
        labels = np.array([by_token[t] for t in raw_labels], dtype=int)
        mapping = tuple((token, by_token[token]) for token in distinct)

    feature_names = None
    if header is not None:
        feature_names = tuple(
            name for c, name in enumerate(header) if c != label_idx
        )
    return CsvLoadResult(
        dataset=Dataset(values, labels, feature_names),
        label_mapping=mapping,
        header=header,
    )


def write_csv(path: str, dataset: Dataset) -> None:
    """Emit a Dataset with 17-significant-digit floats (label column last)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        names = dataset.feature_names or tuple(f"f{i}" for i in range(dataset.d))
        writer.writerow(list(names) + (["label"] if dataset.is_labeled else []))
        for r in range(dataset.n):
            row = [format_float(v) for v in dataset.values[r]]
            if dataset.is_labeled:
                row.append(str(int(dataset.labels[r])))
            writer.writerow(row)


def _bounded_noise(rng: np.random.Generator, shape, std: float) -> np.ndarray:
    """Zero-mean uniform noise with the requested standard deviation.

    Uniform on [-h, h] has std h/sqrt(3); bounded support keeps synthetic
    cluster arms from bridging through rare heavy tails.
    """
    half_width = std * math.sqrt(3.0)
    return rng.uniform(-half_width, half_width, size=shape)


def _make_blobs(n: int, noise_std: float, rng: np.random.Generator) -> Dataset:
    centers = np.array([[-1.5, 0.0], [1.5, 0.0]])
    half = n // 2
    sizes = [half, n - half]
    points = []
    labels = []
    for k, size in enumerate(sizes):
        points.append(centers[k] + rng.normal(0.0, noise_std, size=(size, 2)))
        labels.extend([k] * size)
    return Dataset(np.vstack(points), np.array(labels))


def _make_two_moons(n: int, noise_std: float, rng: np.random.Generator) -> Dataset:
    half = n // 2
    sizes = [half, n - half]
    t0 = rng.uniform(0.0, math.pi, size=sizes[0])
    t1 = rng.uniform(0.0, math.pi, size=sizes[1])
    upper = np.column_stack([np.cos(t0), np.sin(t0)])
    lower = np.column_stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)])
    points = np.vstack([upper, lower]) + _bounded_noise(rng, (n, 2), noise_std)
    labels = np.array([0] * sizes[0] + [1] * sizes[1])
    return Dataset(points, labels)


def _arc_length_uniform(rng: np.random.Generator, size: int, r0: float,
                        turns: float) -> np.ndarray:
    """Sample spiral parameters so points spread evenly along the curve."""
    grid = np.linspace(0.0, 1.0, 2049)
    r = r0 + (1.0 - r0) * grid
    theta = grid * turns * 2.0 * math.pi
    x = r * np.cos(theta)
    y = r * np.sin(theta)
    seg = np.hypot(np.diff(x), np.diff(y))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    cum /= cum[-1]
    u = rng.uniform(0.0, 1.0, size=size)
    return np.interp(u, cum, grid)


def _make_spirals(n: int, noise_std: float, rng: np.random.Generator) -> Dataset:
    turns = 0.55
    r0 = 0.45
    half = n // 2
    sizes = [half, n - half]
    points = []
    labels = []
    for k, size in enumerate(sizes):
        t = _arc_length_uniform(rng, size, r0, turns)
        r = r0 + (1.0 - r0) * t
        theta = t * turns * 2.0 * math.pi
        arm = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
        if k == 1:
            arm = -arm
        points.append(arm + _bounded_noise(rng, (size, 2), noise_std))
        labels.extend([k] * size)
    return Dataset(np.vstack(points), np.array(labels))


def _make_fourclass_like(n: int, noise_std: float, rng: np.random.Generator) -> Dataset:
    """Nonconvex two-class shape: each class is a crescent plus a blob.

    The four lobes alternate class membership so neither class is convex,
    but lobes of different classes stay separated by a margin several times
    the noise scale, keeping purity-1 balls large.
    """
    quarter = n // 4
    sizes = [quarter, quarter, quarter, n - 3 * quarter]
    parts = []
    labels = []
    # class 0: upper crescent + lower-right blob
    t = rng.uniform(0.15 * math.pi, 0.85 * math.pi, size=sizes[0])
    parts.append(np.column_stack([1.6 * np.cos(t), 1.6 * np.sin(t)]))
    labels.extend([0] * sizes[0])
    parts.append(np.array([1.2, -1.0]) + rng.normal(0.0, 0.25, size=(sizes[1], 2)))
    labels.extend([0] * sizes[1])
    # class 1: inner blob + lower-left crescent
    parts.append(np.array([0.0, 0.35]) + rng.normal(0.0, 0.28, size=(sizes[2], 2)))
    labels.extend([1] * sizes[2])
    t = rng.uniform(1.1 * math.pi, 1.8 * math.pi, size=sizes[3])
    parts.append(np.column_stack([-0.6 + 1.5 * np.cos(t), 1.5 * np.sin(t)]))
    labels.extend([1] * sizes[3])
    points = np.vstack(parts) + _bounded_noise(rng, (n, 2), noise_std)
    return Dataset(points, np.array(labels))


_MAKERS = {
    "blobs": _make_blobs,
    "two_moons": _make_two_moons,
    "fourclass_like": _make_fourclass_like,
    "spirals": _make_spirals,
}


def make_synthetic(kind: str, n: int, noise_std: float, seed: int) -> Dataset:
    """Deterministic labeled 2-D fixture of the requested kind."""
    if kind not in _MAKERS:
        raise InvalidInput(f"unknown synthetic kind {kind!r}; choose from {SYNTHETIC_KINDS}")
    if n < 4:
        raise InvalidInput("synthetic datasets need n >= 4")
    if noise_std < 0:
        raise InvalidInput("noise_std must be >= 0")
    rng = np.random.default_rng(seed)
    return _MAKERS[kind](n, noise_std, rng)


def inject_label_noise(dataset: Dataset, rate: float, seed: int) -> tuple[Dataset, list[int]]:
    """Flip exactly round(rate*n) labels to a different uniformly chosen label."""
    if not 0.0 <= rate < 1.0:
        raise InvalidInput("noise rate must be in [0, 1)")
    labels = dataset.require_labels()
    universe = np.unique(labels)
    if universe.size < 2:
        raise MissingLabels("label-noise injection needs at least two distinct labels")
    k = round(rate * dataset.n)
    if k == 0:
        return dataset, []
    rng = np.random.default_rng(seed)
    flipped = np.sort(rng.choice(dataset.n, size=k, replace=False))
    new_labels = labels.copy()
    for i in flipped:
        others = universe[universe != labels[i]]
        new_labels[i] = others[rng.integers(others.size)]
    return Dataset(dataset.values, new_labels, dataset.feature_names), [int(i) for i in flipped]


def adjusted_rand_index(pred, truth) -> float:
    """Standard ARI; id -1 marks noise and counts as a singleton class per point."""
    pred = np.asarray(pred, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise InvalidInput("labelings must be 1-D arrays of equal length")

    def expand_noise(ids: np.ndarray) -> np.ndarray:
        ids = ids.copy()
        next_id = ids.max(initial=0) + 1
        for i in np.flatnonzero(ids == NOISE):
            ids[i] = next_id
            next_id += 1
        return ids

    a = expand_noise(pred)
    b = expand_noise(truth)
    _, a = np.unique(a, return_inverse=True)
    _, b = np.unique(b, return_inverse=True)
    table = np.zeros((a.max() + 1, b.max() + 1), dtype=np.int64)
    np.add.at(table, (a, b), 1)

    sum_cells = comb(table, 2).sum()
    sum_rows = comb(table.sum(axis=1), 2).sum()
    sum_cols = comb(table.sum(axis=0), 2).sum()
    total = comb(len(a), 2)
    expected = sum_rows * sum_cols / total if total else 0.0
    max_index = (sum_rows + sum_cols) / 2.0
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))


def fingerprint(dataset: Dataset) -> str:
    """SHA-256 over a canonical text rendering of values and labels."""
    parts = [format_float(v) for v in dataset.values.ravel()]
    if dataset.is_labeled:
        parts.append("|")
        parts.extend(str(int(v)) for v in dataset.labels)
    return sha256_text(",".join(parts))


@dataclass(frozen=True)
class ExperimentReport:
    """One (algorithm, seed) outcome with its config and dataset identity."""

    algorithm: str
    config: dict
    metrics: dict
    seed: int
    dataset_fingerprint: str

    def __post_init__(self):
        for key, value in self.metrics.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise InvalidInput(f"metric {key!r} is not finite")

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "config": self.config,
            "metrics": self.metrics,
            "seed": self.seed,
            "dataset_fingerprint": self.dataset_fingerprint,
        }
