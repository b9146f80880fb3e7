"""Linear ball-input SVM, plain and fuzzy-weighted.

Training inputs are (center, radius, class, membership) tuples rather than
points. The margin constraint asks the separating plane to clear each ball's
boundary, which adds a ||w|| * r_i term to the hinge:

    minimize  0.5 ||w||^2 + C * sum_i delta_i * max(0, 1 - y_i (w.c_i + b) + ||w|| r_i)

The objective is convex (the ||w|| r_i term is a norm scaled by a nonnegative
constant) but nonsmooth, so it is minimized by deterministic averaged
subgradient descent. Because the step schedule 1/(lambda t) with
lambda = 1/C is unstable when started cold at large C, training warm-starts
through a geometric ladder of C values; each stage is plain subgradient
descent on the same objective family, and the best averaged iterate across
all stages (measured on the final objective) is returned.

Dual multipliers are not produced by the solver; they are recovered
afterwards from the active margin constraints and used to verify the
stationarity identity tying w to the weighted center sum.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import lsq_linear

from .core import Dataset, GranularBall
from .errors import DegenerateDual, DimensionError, InvalidInput, NonFinite, SingleClass

HARD_MARGIN_C = 1e6


@dataclass(frozen=True)
class BallSample:
    """One training ball: center, radius, class in {-1,+1}, fuzzy weight."""

    center: np.ndarray
    radius: float
    y: int
    delta: float = 1.0

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        object.__setattr__(self, "center", center)
        if self.radius < 0:
            raise InvalidInput("ball radius must be non-negative")
        if self.y not in (-1, 1):
            raise InvalidInput(f"class must be -1 or +1, got {self.y}")
        if not 0.0 < self.delta <= 1.0:
            raise InvalidInput(f"membership must be in (0, 1], got {self.delta}")


@dataclass(frozen=True)
class SolverOptions:
    max_iters: int = 50000
    rel_tol: float = 1e-8
    check_every: int = 100


@dataclass(frozen=True)
class LinearBallModel:
    w: np.ndarray
    b: float
    C: float
    alphas: np.ndarray | None
    deltas: np.ndarray
    objective_trace: tuple[float, ...]

    @property
    def dimension(self) -> int:
        return self.w.shape[0]


def _unpack(balls: list[BallSample]):
    cs = np.stack([s.center for s in balls])
    rs = np.array([s.radius for s in balls])
    ys = np.array([float(s.y) for s in balls])
    ds = np.array([s.delta for s in balls])
    return cs, rs, ys, ds


def _objective(w, b, C, cs, rs, ys, ds) -> float:
    margins = 1.0 - ys * (cs @ w + b) + np.linalg.norm(w) * rs
    return float(0.5 * w @ w + C * np.sum(ds * np.maximum(0.0, margins)))


def _subgradient_stage(w, b, C_eff, cs, rs, ys, ds, C_final, iters, best, trace, rel_tol, check_every):
    """One warm-started descent stage; tracks the best averaged iterate."""
    d = w.shape[0]
    lam = 1.0 / C_eff
    wa = w.copy()
    ba = b
    prev_check = None
    for t in range(1, iters + 1):
        nw = np.linalg.norm(w)
        margins = 1.0 - ys * (cs @ w + b) + nw * rs
        active = margins > 0.0
        gw = lam * w
        gb = 0.0
        if active.any():
            unit = w / nw if nw > 0 else np.zeros(d)
            gw = gw + np.sum(
                ds[active, None] * (-ys[active, None] * cs[active] + rs[active, None] * unit),
                axis=0,
            )
            gb = float(np.sum(ds[active] * -ys[active]))
        eta = 1.0 / (lam * (t + 1))
        w = w - eta * gw
        b = b - eta * gb
        if not np.all(np.isfinite(w)) or not np.isfinite(b):
            raise NonFinite("subgradient iterate diverged")
        wa = (wa * t + w) / (t + 1)
        ba = (ba * t + b) / (t + 1)
        if t % check_every == 0 or t == iters:
            obj = _objective(wa, ba, C_final, cs, rs, ys, ds)
            if not np.isfinite(obj):
                raise NonFinite("objective diverged")
            if obj < best[0]:
                best[0] = obj
                best[1] = wa.copy()
                best[2] = ba
                trace.append(obj)
            if prev_check is not None:
                rel = abs(prev_check - obj) / max(abs(prev_check), 1e-30)
                if rel < rel_tol:
                    break
            prev_check = obj
    return best


def train_primal(balls: list[BallSample], C: float,
                 opts: SolverOptions = SolverOptions()) -> LinearBallModel:
    """Fit w, b by averaged subgradient descent with C-continuation.

    The recorded objective trace is the best-so-far value of the true
    objective at the averaged iterates, so it is non-increasing by
    construction.
    """
    if C <= 0:
        raise InvalidInput("C must be positive")
    if not balls:
        raise InvalidInput("no training balls")
    cs, rs, ys, ds = _unpack(balls)
    if not (np.any(ys > 0) and np.any(ys < 0)):
        raise SingleClass("training needs at least one ball of each class")

    # warm start: vector between class-weighted center means
    w = cs[ys > 0].mean(axis=0) - cs[ys < 0].mean(axis=0)
    b = 0.0

    stages = []
    c_eff = min(C, 1.0)
    while c_eff < C:
        stages.append(c_eff)
        c_eff *= 10.0
    stages.append(C)
    per_stage = max(1000, opts.max_iters // len(stages))

    best = [_objective(w, b, C, cs, rs, ys, ds), w.copy(), b]
    trace = [best[0]]
    for c_eff in stages:
        best = _subgradient_stage(
            best[1].copy(), best[2], c_eff, cs, rs, ys, ds, C,
            per_stage, best, trace, opts.rel_tol, opts.check_every,
        )
    return LinearBallModel(
        w=best[1], b=float(best[2]), C=float(C), alphas=None,
        deltas=ds, objective_trace=tuple(trace),
    )


@dataclass(frozen=True)
class DualReport:
    alphas: np.ndarray
    reconstruction_residual: float
    sum_alpha_y: float
    box_satisfied: bool
    active_indices: tuple[int, ...]


def recover_dual(model: LinearBallModel, balls: list[BallSample],
                 active_tol: float = 1e-2) -> DualReport:
    """Estimate multipliers from active constraints and verify stationarity.

    Stationarity of the Lagrangian in w gives
        sum_i a_i (y_i c_i - (r_i/||w||) w) = w,
    which is linear in the multipliers, so they are recovered by bounded
    least squares on the active set together with sum_i a_i y_i = 0. The
    report carries the relative residual of rebuilding w from the recovered
    multipliers through the weighted-center-sum identity.
    """
    cs, rs, ys, ds = _unpack(balls)
    w, b, C = model.w, model.b, model.C
    nw = float(np.linalg.norm(w))
    if nw == 0:
        raise DegenerateDual("model has zero weight vector")
    margins = ys * (cs @ w + b) - nw * rs
    active = np.where(margins <= 1.0 + active_tol)[0]
    if active.size == 0:
        raise DegenerateDual("no active margin constraints")

    rows = (ys[active, None] * cs[active] - (rs[active, None] / nw) * w).T
    balance_weight = 1e3  # push sum a_i y_i toward 0 hard
    A = np.vstack([rows, balance_weight * ys[active][None, :]])
    target = np.concatenate([w, [0.0]])
    sol = lsq_linear(A, target, bounds=(0.0, ds[active] * C))
    alphas = np.zeros(len(balls))
    alphas[active] = sol.x

    v = (alphas * ys) @ cs
    nv = float(np.linalg.norm(v))
    if nv < 1e-12 * max(nw, 1.0):
        raise DegenerateDual("weighted center sum vanishes")
    w_rec = (nv - float(alphas @ rs)) / nv * v
    residual = float(np.linalg.norm(w_rec - w) / nw)
    box_ok = bool(np.all(alphas >= -1e-9) and np.all(alphas <= ds * C + 1e-9))
    return DualReport(
        alphas=alphas,
        reconstruction_residual=residual,
        sum_alpha_y=float(alphas @ ys),
        box_satisfied=box_ok,
        active_indices=tuple(int(i) for i in active),
    )


def predict(model: LinearBallModel, query) -> int:
    """sign(w.q + b), with the boundary itself classified as +1."""
    q = np.asarray(query, dtype=float)
    if q.shape != model.w.shape:
        raise DimensionError(f"query shape {q.shape} != ({model.dimension},)")
    return 1 if float(model.w @ q + model.b) >= 0.0 else -1


def predict_many(model: LinearBallModel, queries) -> np.ndarray:
    q = np.asarray(queries, dtype=float)
    if q.ndim != 2 or q.shape[1] != model.dimension:
        raise DimensionError(f"queries shape {q.shape} incompatible with d={model.dimension}")
    return np.where(q @ model.w + model.b >= 0.0, 1, -1)


class MembershipMode(enum.Enum):
    MEAN_OF_MEMBERS = "mean_of_members"
    CENTER_VALUE = "center_value"


def ball_membership(dataset: Dataset, ball: GranularBall, point_membership,
                    mode: MembershipMode = MembershipMode.MEAN_OF_MEMBERS) -> float:
    """Fuzzy weight of a ball from per-sample memberships.

    MEAN_OF_MEMBERS averages the supplied per-row memberships over the
    ball's members; CENTER_VALUE expects ``point_membership`` to be a
    callable and evaluates it at the ball center.
    """
    if mode is MembershipMode.CENTER_VALUE:
        if not callable(point_membership):
            raise InvalidInput("CENTER_VALUE mode needs a callable membership function")
        value = float(point_membership(ball.center))
    else:
        ms = np.asarray(point_membership, dtype=float)
        if ms.ndim != 1 or ms.shape[0] != dataset.n:
            raise InvalidInput("per-sample memberships must have one value per dataset row")
        if ms.size == 0:
            raise InvalidInput("empty membership list")
        value = float(ms[list(ball.members)].mean())
    if not 0.0 < value <= 1.0:
        raise InvalidInput(f"membership {value} outside (0, 1]")
    return value


def balls_to_samples(dataset: Dataset, ball_set, positive_label: int,
                     memberships=None) -> list[BallSample]:
    """Convert labeled balls to SVM inputs; ``positive_label`` maps to +1."""
    samples = []
    for ball in ball_set.balls:
        delta = 1.0
        if memberships is not None:
            delta = ball_membership(dataset, ball, memberships)
        y = 1 if ball.label == positive_label else -1
        samples.append(BallSample(ball.center, ball.radius, y, delta))
    return samples
