"""End-to-end experiment suites: robustness, efficiency, reduction, optimize.

Each suite function is pure given its arguments and returns a list of
ExperimentReport values, one per (algorithm, seed) cell, so the CLI and the
acceptance tests run exactly the same code. Per-seed runs are independent
and may be executed concurrently; the GBTK_THREADS environment variable
caps the worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import knn, optimize as opt, roughset
from .core import Dataset
from .data import ExperimentReport, adjusted_rand_index, fingerprint, inject_label_noise, make_synthetic
from .errors import InvalidInput
from .splitting import SplitConfig, adaptive_purity_search, generate_classification_balls

SUITES = ("robustness", "efficiency", "reduction", "optimize")

NOISE_RATES = (0.0, 0.1, 0.2)


def thread_count() -> int:
    """Worker cap from GBTK_THREADS, defaulting to the machine's cores."""
    raw = os.environ.get("GBTK_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise InvalidInput(f"GBTK_THREADS must be an integer, got {raw!r}") from None
        if value < 1:
            raise InvalidInput("GBTK_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


def _map_seeds(fn, seeds):
    workers = min(thread_count(), max(1, len(seeds)))
    if workers == 1:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds))


def _one_nn_accuracy(train: Dataset, test: Dataset) -> float:
    """Plain 1-nearest-neighbor baseline accuracy."""
    d = np.linalg.norm(
        test.values[:, None, :] - train.values[None, :, :], axis=2
    )
    pred = train.require_labels()[np.argmin(d, axis=1)]
    return float(np.mean(pred == test.require_labels()))


def _split_train_test(dataset: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    rng = np.random.default_rng(seed)
    order = rng.permutation(dataset.n)
    n_test = max(1, int(round(test_fraction * dataset.n)))
    test_idx = np.sort(order[:n_test])
    train_idx = np.sort(order[n_test:])
    take = lambda idx: Dataset(dataset.values[idx], dataset.labels[idx], dataset.feature_names)
    return take(train_idx), take(test_idx)


def _gbknn_accuracy(train: Dataset, test: Dataset) -> float:
    """GBkNN with the purity threshold chosen by grid search on training purity balance."""

    def validator(ball_set) -> float:
        # reward coverage by non-singleton balls weighted by their purity
        score = sum(b.size * b.purity for b in ball_set.balls if not b.is_singleton)
        return score / ball_set.source_n

    t = adaptive_purity_search(train, SplitConfig(), validator)
    model = knn.fit(train, SplitConfig(purity_threshold=t))
    pred = knn.predict_many(model, test.values)
    return float(np.mean(pred == test.require_labels()))


def robustness_suite(seeds, rates=NOISE_RATES, n: int = 600) -> list[ExperimentReport]:
    """GBkNN vs 1-NN on two-blob data under symmetric training-label noise."""

    def run(seed: int) -> list[ExperimentReport]:
        base = make_synthetic("blobs", n, 0.5, seed)
        fp = fingerprint(base)
        train, test = _split_train_test(base, 0.3, seed + 10_000)
        reports = []
        for rate in rates:
            noisy_train, flipped = inject_label_noise(train, rate, seed + 20_000)
            for algo, acc in (
                ("gbknn", _gbknn_accuracy(noisy_train, test)),
                ("1nn", _one_nn_accuracy(noisy_train, test)),
            ):
                reports.append(ExperimentReport(
                    algorithm=algo,
                    config={"noise_rate": rate, "n": n, "test_fraction": 0.3},
                    metrics={"accuracy": acc, "flipped": len(flipped)},
                    seed=seed,
                    dataset_fingerprint=fp,
                ))
        return reports

    return [r for group in _map_seeds(run, list(seeds)) for r in group]


def efficiency_suite(seeds, n: int = 1000) -> list[ExperimentReport]:
    """Ball generation at purity 1: recounted purity and data-volume ratio."""

    def run(seed: int) -> ExperimentReport:
        dataset = make_synthetic("fourclass_like", n, 0.08, seed)
        ball_set = generate_classification_balls(dataset, SplitConfig(purity_threshold=1.0, seed=seed))
        labels = dataset.require_labels()
        all_pure = all(
            len(set(labels[list(b.members)])) == 1 for b in ball_set.balls
        )
        return ExperimentReport(
            algorithm="gen-balls",
            config={"purity": 1.0, "n": n},
            metrics={
                "ball_count": len(ball_set),
                "ratio": len(ball_set) / n,
                "coverage": ball_set.covered_count / n,
                "all_pure": bool(all_pure),
            },
            seed=seed,
            dataset_fingerprint=fingerprint(dataset),
        )

    return _map_seeds(run, list(seeds))


def make_reduct_table(n: int = 500, seed: int = 0) -> Dataset:
    """Decision table with 3 informative, 3 copied, and 2 noise attributes.

    The label is the sign pattern of the three informative columns, whose
    values cluster at +/-1, so all three are needed for full dependency.
    Columns 3-5 duplicate columns 0-2 and columns 6-7 are uniform noise.
    """
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(n, 3)) * 2 - 1
    informative = signs + rng.normal(0.0, 0.22, size=(n, 3))
    labels = ((signs[:, 0] > 0).astype(int)
              + 2 * (signs[:, 1] > 0).astype(int)
              + 4 * (signs[:, 2] > 0).astype(int))
    noise_cols = rng.uniform(-1.0, 1.0, size=(n, 2))
    values = np.hstack([informative, informative.copy(), noise_cols])
    return Dataset(values, labels)


def reduction_suite(seeds, n: int = 500) -> list[ExperimentReport]:
    def run(seed: int) -> ExperimentReport:
        table = make_reduct_table(n, seed)
        result = roughset.greedy_reduct(table, epsilon=0.0)
        return ExperimentReport(
            algorithm="greedy-reduct",
            config={"n": n, "epsilon": 0.0},
            metrics={
                "gamma_full": result.gamma_full,
                "gamma_reduct": result.gamma_history[-1][1] if result.gamma_history else 0.0,
                "selected": list(result.selected),
                "reduct_size": len(result.selected),
            },
            seed=seed,
            dataset_fingerprint=fingerprint(table),
        )

    return _map_seeds(run, list(seeds))


def random_search(problem: opt.ObjectiveProblem, budget: int, seed: int) -> float:
    """Uniform sampling baseline at the same evaluation budget."""
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(budget):
        point = rng.uniform(problem.lower, problem.upper)
        best = min(best, float(problem.func(point)))
    return best


def optimize_suite(seeds) -> list[ExperimentReport]:
    """Shrinking-ball search vs seeded random search on standard test functions."""
    cases = (
        ("sphere-d2", opt.sphere, 2, 5000),
        ("sphere-d5", opt.sphere, 5, 5000),
        ("rastrigin-d2", opt.rastrigin, 2, 10000),
    )

    def run(seed: int) -> list[ExperimentReport]:
        reports = []
        for name, func, d, budget in cases:
            problem = opt.ObjectiveProblem(func, [-5.0] * d, [5.0] * d)
            result = opt.optimize(problem, opt.OptimizeConfig(budget=budget))
            baseline = random_search(problem, budget, seed)
            reports.append(ExperimentReport(
                algorithm="gb-optimize",
                config={"function": name, "budget": budget, "dimension": d},
                metrics={
                    "best_value": result.best_value,
                    "eval_count": result.evaluations,
                    "random_search_best": baseline,
                },
                seed=seed,
                dataset_fingerprint="none",
            ))
        return reports

    return [r for group in _map_seeds(run, list(seeds)) for r in group]


def run_suite(suite: str, seeds) -> list[ExperimentReport]:
    if suite == "robustness":
        return robustness_suite(seeds)
    if suite == "efficiency":
        return efficiency_suite(seeds)
    if suite == "reduction":
        return reduction_suite(seeds)
    if suite == "optimize":
        return optimize_suite(seeds)
    raise InvalidInput(f"unknown suite {suite!r}; choose from {SUITES}")
