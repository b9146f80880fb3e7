"""Derivative-free box-constrained minimization with shrinking balls.

A ball probes the objective at its center and at the 2d axis boundary
points (center +/- r along each axis, clipped to the box). Its fitness is
the best value seen among those probes. Every probed point spawns a child
ball of half the radius, but a child survives only if its fitness strictly
beats the parent's. Balls are expanded best-fitness-first until the radius
floor or the evaluation budget is reached. The whole procedure is
deterministic for a deterministic objective.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetTooSmall, InvalidInput, NonFiniteObjective


@dataclass(frozen=True)
class ObjectiveProblem:
    """A scalar objective on an axis-aligned box."""

    func: object
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise InvalidInput("bounds must be 1-D arrays of equal length")
        if not np.all(lower < upper):
            raise InvalidInput("every lower bound must be below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    def clip(self, point: np.ndarray) -> np.ndarray:
        return np.clip(point, self.lower, self.upper)


@dataclass(frozen=True)
class TraceEntry:
    eval_index: int
    point: np.ndarray
    value: float
    ball_radius: float


@dataclass(frozen=True)
class OptimizeResult:
    best_point: np.ndarray
    best_value: float
    evaluations: int
    trace: tuple[TraceEntry, ...]


@dataclass(frozen=True)
class OptimizeConfig:
    """Search options.

    ``include_center`` adds the ball center to the fitness evaluation set.
    With it on (the default) the box midpoint is always sampled, but a
    child re-centered on its parent's best point ties the parent and the
    strict survival rule prunes it, so interior optima away from probe
    points can stall; boundary-only mode (``include_center=False``) keeps
    descending in that case.
    """

    budget: int = 1000
    min_radius: float = 1e-6
    initial_radius: float | None = None
    include_center: bool = True

    def __post_init__(self):
        if self.budget < 1:
            raise InvalidInput("budget must be >= 1")
        if self.min_radius <= 0:
            raise InvalidInput("min_radius must be positive")


@dataclass
class _OptBall:
    center: np.ndarray
    radius: float
    fitness: float = np.inf
    probes: list = field(default_factory=list)  # (point, value) pairs
    child_sites: list = field(default_factory=list)


def _dedup(points: list[np.ndarray]) -> list[np.ndarray]:
    unique: list[np.ndarray] = []
    for p in points:
        if not any(np.linalg.norm(p - q) <= 1e-12 for q in unique):
            unique.append(p)
    return unique


def _probe_points(problem: ObjectiveProblem, center: np.ndarray, radius: float,
                  include_center: bool = True) -> list[np.ndarray]:
    """Clipped axis boundary points (optionally plus the center), deduplicated."""
    points = [problem.clip(center)] if include_center else []
    for k in range(problem.dimension):
        for sign in (1.0, -1.0):
            p = center.copy()
            p[k] += sign * radius
            points.append(problem.clip(p))
    return _dedup(points)


def optimize(problem: ObjectiveProblem, config: OptimizeConfig = OptimizeConfig()) -> OptimizeResult:
    """Best-first shrinking-ball search over the box."""
    d = problem.dimension
    center = (problem.lower + problem.upper) / 2.0
    radius = config.initial_radius
    if radius is None:
        radius = float(np.max(problem.upper - problem.lower) / 2.0)
    if config.budget < 1 + 2 * d:
        raise BudgetTooSmall(
            f"budget {config.budget} cannot evaluate one ball in dimension {d} "
            f"(needs {1 + 2 * d})"
        )

    evals = 0
    trace: list[TraceEntry] = []
    best_point = None
    best_value = np.inf

    def evaluate(point: np.ndarray, ball_radius: float) -> float:
        nonlocal evals, best_point, best_value
        value = float(problem.func(point))
        if not np.isfinite(value):
            raise NonFiniteObjective(f"objective returned {value} at {point.tolist()}")
        trace.append(TraceEntry(evals, point.copy(), value, ball_radius))
        evals += 1
        if value < best_value:
            best_value = value
            best_point = point.copy()
        return value

    def expand(ball: _OptBall) -> bool:
        """Probe a ball; returns False if the budget ran out mid-ball."""
        for p in _probe_points(problem, ball.center, ball.radius, config.include_center):
            if evals >= config.budget:
                return False
            v = evaluate(p, ball.radius)
            ball.probes.append((p, v))
        ball.fitness = min(v for _, v in ball.probes)
        # children grow from the boundary points; re-spawning on the center
        # would tie the parent's fitness and die under the strict rule anyway
        ball.child_sites = _probe_points(
            problem, ball.center, ball.radius, include_center=False
        )
        return True

    counter = 0
    heap: list[tuple[float, int, _OptBall]] = []
    root = _OptBall(center=center, radius=radius)
    if expand(root):
        counter += 1
        heapq.heappush(heap, (root.fitness, counter, root))

    while heap and evals < config.budget:
        _, _, ball = heapq.heappop(heap)
        child_radius = ball.radius / 2.0
        if child_radius < config.min_radius:
            continue
        for point in ball.child_sites:
            child = _OptBall(center=point.copy(), radius=child_radius)
            if not expand(child):
                break
            if child.fitness < ball.fitness:
                counter += 1
                heapq.heappush(heap, (child.fitness, counter, child))
        # the parent is exhausted; its information lives on in the children

    return OptimizeResult(
        best_point=best_point,
        best_value=best_value,
        evaluations=evals,
        trace=tuple(trace),
    )


def sphere(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(x * x))


def rosenbrock(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))
