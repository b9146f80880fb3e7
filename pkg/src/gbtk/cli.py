"""Batch command-line front end.

Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 data error.
Every command that takes --seed is bit-reproducible: all JSON goes through
the canonical serializer and wall-clock timings are written to a separate
``.timing`` sidecar so the primary artifacts hash identically across runs.
"""
from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import cluster as clustering_mod
from . import knn, optimize as opt, roughset, svm
from .core import BallSet, Dataset, RadiusMode
from .data import (
    CsvLoadResult,
    SYNTHETIC_KINDS,
    adjusted_rand_index,
    fingerprint,
    load_csv,
    make_synthetic,
    write_csv,
)
from .errors import EmptyFile, GbtkError, InvalidInput, ParseError, RaggedRows
from .experiments import SUITES, run_suite
from .serialize import atomic_write_text, ball_set_to_dict, canonical_json, write_json, write_json_lines
from .splitting import SplitConfig, generate_classification_balls

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_DATA = 3

DATA_ERRORS = (ParseError, RaggedRows, EmptyFile, FileNotFoundError, IsADirectoryError, PermissionError)


def _radius_mode(name: str) -> RadiusMode:
    return RadiusMode(name)


def _load_input(path: str, labeled: bool) -> CsvLoadResult:
    return load_csv(path, has_header=True, label_column=-1 if labeled else None)


def _write_figure(render, out_path: str) -> None:
    """Render a PNG next to the data artifact; rendering is best-effort."""
    figure_path = os.path.splitext(out_path)[0] + ".png"
    render(figure_path)


def _write_timing(out_path: str, elapsed: float) -> None:
    atomic_write_text(out_path + ".timing", f"{elapsed * 1000.0:.3f} ms\n")


def _model_path(args) -> str:
    return args.model


# ---------------------------------------------------------------- commands

def cmd_gen_balls(args) -> int:
    started = time.perf_counter()
    loaded = _load_input(args.input, labeled=args.mode == "classify")
    dataset = loaded.dataset
    if args.mode == "classify":
        config = SplitConfig(
            purity_threshold=args.purity,
            radius_mode=_radius_mode(args.radius_mode),
            seed=args.seed,
        )
        ball_set = generate_classification_balls(dataset, config)
        write_json(args.output, ball_set_to_dict(ball_set))
        geometry = [
            {"center": list(b.center), "radius": float(b.radius)}
            for b in ball_set.balls
        ]
        write_json(os.path.splitext(args.output)[0] + ".geometry.json", geometry)
        from .report import render_ball_set
        _write_figure(lambda p: render_ball_set(dataset, ball_set, p), args.output)
    else:
        config = clustering_mod.ClusterConfig(
            radius_mode=_radius_mode(args.radius_mode),
            seed=args.seed,
        )
        result = clustering_mod.cluster(dataset, config)
        groups: dict[int, list[int]] = {}
        for ball_idx, cid in enumerate(result.ball_cluster):
            if cid != clustering_mod.NOISE:
                groups.setdefault(cid, []).append(ball_idx)
        payload = {
            "clusters": [
                {
                    "id": cid,
                    "balls": groups[cid],
                    "points": sorted(
                        m for i in groups[cid] for m in result.balls[i].members
                    ),
                }
                for cid in sorted(groups)
            ],
            "noise_points": list(result.noise_points),
        }
        write_json(args.output, payload)
        geometry = [
            {"center": list(b.center), "radius": float(b.radius)}
            for b in result.balls
        ]
        write_json(os.path.splitext(args.output)[0] + ".geometry.json", geometry)
        from .report import render_clustering
        _write_figure(lambda p: render_clustering(dataset, result, p), args.output)
    _write_timing(args.output, time.perf_counter() - started)
    return EXIT_OK


def _ball_set_from_dict(payload: dict, dimension: int) -> BallSet:
    from .core import GranularBall
    mode = RadiusMode(payload["radius_mode"])
    balls = tuple(
        GranularBall(
            members=tuple(int(m) for m in entry["members"]),
            center=np.asarray(entry["center"], dtype=float),
            radius=float(entry["radius"]),
            radius_mode=mode,
            label=int(entry["label"]) if "label" in entry else None,
            purity=float(entry["purity"]) if "purity" in entry else None,
        )
        for entry in payload["balls"]
    )
    source_n = max((m for b in balls for m in b.members), default=-1) + 1
    return BallSet(
        balls=balls,
        source_n=source_n,
        radius_mode=mode,
        purity_threshold=payload.get("threshold"),
        seed=int(payload.get("seed", 0)),
    )


def cmd_gbknn(args) -> int:
    import json

    if args.action == "train":
        dataset = _load_input(args.input, labeled=True).dataset
        model = knn.fit(dataset, SplitConfig(
            purity_threshold=args.purity,
            radius_mode=_radius_mode(args.radius_mode),
            seed=args.seed,
        ))
        payload = ball_set_to_dict(model.ball_set)
        payload["dimension"] = model.dimension
        write_json(args.output, payload)
        return EXIT_OK

    with open(_model_path(args)) as handle:
        payload = json.load(handle)
    dimension = int(payload["dimension"])
    model = knn.GbknnModel(_ball_set_from_dict(payload, dimension), dimension)

    if args.action == "predict":
        dataset = _load_input(args.input, labeled=False).dataset
        pred = knn.predict_many(model, dataset.values)
        write_json(args.output, {"predictions": [int(p) for p in pred]})
        return EXIT_OK

    loaded = _load_input(args.input, labeled=True)
    dataset = loaded.dataset
    pred = knn.predict_many(model, dataset.values)
    accuracy = float(np.mean(pred == dataset.require_labels()))
    write_json(args.output, {
        "accuracy": accuracy,
        "n": dataset.n,
        "dataset_fingerprint": fingerprint(dataset),
    })
    return EXIT_OK


def cmd_gbsvm(args) -> int:
    import json

    if args.action == "train":
        dataset = _load_input(args.input, labeled=True).dataset
        labels = dataset.require_labels()
        distinct = np.unique(labels)
        if distinct.size != 2:
            raise InvalidInput(f"SVM training needs exactly 2 classes, found {distinct.size}")
        ball_set = generate_classification_balls(dataset, SplitConfig(
            purity_threshold=args.purity,
            radius_mode=_radius_mode(args.radius_mode),
            seed=args.seed,
        ))
        samples = svm.balls_to_samples(dataset, ball_set, positive_label=int(distinct[1]))
        model = svm.train_primal(samples, args.c)
        try:
            dual = svm.recover_dual(model, samples)
            alphas = [float(a) for a in dual.alphas]
        except GbtkError:
            alphas = [0.0] * len(samples)
        write_json(args.output, {
            "w": [float(v) for v in model.w],
            "b": model.b,
            "C": model.C,
            "alphas": alphas,
            "delta": [float(d) for d in model.deltas],
        })
        return EXIT_OK

    with open(_model_path(args)) as handle:
        payload = json.load(handle)
    model = svm.LinearBallModel(
        w=np.asarray(payload["w"], dtype=float),
        b=float(payload["b"]),
        C=float(payload["C"]),
        alphas=np.asarray(payload["alphas"], dtype=float),
        deltas=np.asarray(payload["delta"], dtype=float),
        objective_trace=(),
    )

    if args.action == "predict":
        dataset = _load_input(args.input, labeled=False).dataset
        pred = svm.predict_many(model, dataset.values)
        write_json(args.output, {"predictions": [int(p) for p in pred]})
        return EXIT_OK

    dataset = _load_input(args.input, labeled=True).dataset
    labels = dataset.require_labels()
    distinct = np.unique(labels)
    if distinct.size != 2:
        raise InvalidInput("SVM evaluation needs exactly 2 classes")
    truth = np.where(labels == distinct[1], 1, -1)
    pred = svm.predict_many(model, dataset.values)
    write_json(args.output, {
        "accuracy": float(np.mean(pred == truth)),
        "n": dataset.n,
        "dataset_fingerprint": fingerprint(dataset),
    })
    return EXIT_OK


def cmd_cluster(args) -> int:
    args.mode = "cluster"
    return cmd_gen_balls(args)


def cmd_reduct(args) -> int:
    dataset = _load_input(args.input, labeled=True).dataset
    result = roughset.greedy_reduct(dataset, epsilon=args.epsilon)
    write_json(args.output, {
        "selected": [int(a) for a in result.selected],
        "gamma_history": [[int(a), float(g)] for a, g in result.gamma_history],
        "gamma_full": float(result.gamma_full),
    })
    return EXIT_OK


def cmd_optimize(args) -> int:
    functions = {"sphere": opt.sphere, "rosenbrock": opt.rosenbrock, "rastrigin": opt.rastrigin}
    func = functions[args.func]
    lower = [args.lower] * args.dimension
    upper = [args.upper] * args.dimension
    problem = opt.ObjectiveProblem(func, lower, upper)
    result = opt.optimize(problem, opt.OptimizeConfig(
        budget=args.budget, min_radius=args.min_radius,
    ))
    write_json_lines(args.output, (
        {
            "eval": entry.eval_index,
            "point": [float(v) for v in entry.point],
            "value": entry.value,
            "ball_radius": entry.ball_radius,
        }
        for entry in result.trace
    ))
    write_json(os.path.splitext(args.output)[0] + ".summary.json", {
        "best_point": [float(v) for v in result.best_point],
        "best_value": result.best_value,
        "evaluations": result.evaluations,
    })
    from .report import render_optimize_trace
    _write_figure(lambda p: render_optimize_trace(result.trace, p), args.output)
    return EXIT_OK


def cmd_experiment(args) -> int:
    started = time.perf_counter()
    seeds = list(range(args.seeds))
    reports = run_suite(args.suite, seeds)
    write_json_lines(args.output, (r.to_dict() for r in reports))
    _write_timing(args.output, time.perf_counter() - started)
    return EXIT_OK


def cmd_synth(args) -> int:
    dataset = make_synthetic(args.kind, args.n, args.noise_std, args.seed)
    write_csv(args.output, dataset)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbtk",
        description="Granular-ball computing toolkit: ball generation, "
                    "classification, clustering, attribute reduction, and "
                    "derivative-free optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=True, output=True):
        if output:
            p.add_argument("--output", required=True, help="output JSON path")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")

    p = sub.add_parser("gen-balls", help="generate granular balls from a CSV")
    p.add_argument("--input", required=True, help="input CSV (label column last in classify mode)")
    p.add_argument("--mode", choices=["classify", "cluster"], default="classify",
                   help="generation mode (default: classify)")
    p.add_argument("--purity", type=float, default=1.0, help="purity threshold (default: 1.0)")
    p.add_argument("--radius-mode", choices=["average", "maximum"], default="average",
                   help="radius statistic (default: average)")
    add_common(p)
    p.set_defaults(handler=cmd_gen_balls)

    for name in ("gbknn", "gbsvm"):
        p = sub.add_parser(name, help=f"{name} train/predict/eval")
        p.add_argument("action", choices=["train", "predict", "eval"])
        p.add_argument("--input", required=True, help="input CSV")
        p.add_argument("--model", help="model JSON (predict/eval)")
        p.add_argument("--purity", type=float, default=1.0, help="purity threshold (default: 1.0)")
        p.add_argument("--radius-mode", choices=["average", "maximum"], default="average",
                       help="radius statistic (default: average)")
        if name == "gbsvm":
            p.add_argument("--c", type=float, default=1.0, help="slack penalty C (default: 1.0)")
        add_common(p)
        p.set_defaults(handler=cmd_gbknn if name == "gbknn" else cmd_gbsvm)

    p = sub.add_parser("cluster", help="overlap-graph ball clustering")
    p.add_argument("--input", required=True, help="input CSV (unlabeled)")
    p.add_argument("--radius-mode", choices=["average", "maximum"], default="average",
                   help="radius statistic (default: average)")
    add_common(p)
    p.set_defaults(handler=cmd_cluster)

    p = sub.add_parser("reduct", help="greedy positive-region attribute reduction")
    p.add_argument("--input", required=True, help="input CSV (label column last)")
    p.add_argument("--epsilon", type=float, default=0.0,
                   help="dependency-gain stopping tolerance (default: 0.0)")
    add_common(p)
    p.set_defaults(handler=cmd_reduct)

    p = sub.add_parser("optimize", help="shrinking-ball black-box minimization")
    p.add_argument("--func", choices=["sphere", "rosenbrock", "rastrigin"], required=True,
                   help="built-in test function")
    p.add_argument("--dimension", type=int, default=2, help="problem dimension (default: 2)")
    p.add_argument("--lower", type=float, default=-5.0, help="box lower bound (default: -5)")
    p.add_argument("--upper", type=float, default=5.0, help="box upper bound (default: 5)")
    p.add_argument("--budget", type=int, default=5000, help="evaluation budget (default: 5000)")
    p.add_argument("--min-radius", type=float, default=1e-6,
                   help="smallest ball radius to expand (default: 1e-6)")
    add_common(p)
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("experiment", help="run an acceptance experiment suite")
    p.add_argument("--suite", choices=list(SUITES), required=True, help="suite name")
    p.add_argument("--seeds", type=int, default=10, help="number of seeds 0..k-1 (default: 10)")
    add_common(p)
    p.set_defaults(handler=cmd_experiment)

    p = sub.add_parser("synth", help="write a synthetic fixture CSV")
    p.add_argument("--kind", choices=list(SYNTHETIC_KINDS), required=True)
    p.add_argument("--n", type=int, default=1000, help="sample count (default: 1000)")
    p.add_argument("--noise-std", type=float, default=0.05, dest="noise_std",
                   help="noise standard deviation (default: 0.05)")
    add_common(p)
    p.set_defaults(handler=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.handler(args)
    except DATA_ERRORS as exc:
        print(f"gbtk: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InvalidInput as exc:
        print(f"gbtk: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GbtkError as exc:
        print(f"gbtk: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - last-resort guard
        print(f"gbtk: unexpected failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
