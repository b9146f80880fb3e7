"""Canonical JSON emission and atomic file writes.

All artifacts are emitted through one serializer so that identical inputs
produce byte-identical files: field order is fixed by construction order,
floats are printed with 17 significant digits (enough to round-trip IEEE
doubles), and writes go through a temp file + rename.
"""
from __future__ import annotations

import hashlib
import os
import tempfile
from typing import Any

import numpy as np

from .core import BallSet, GranularBall
from .errors import InvalidInput


def format_float(x: float) -> str:
    if not np.isfinite(x):
        raise InvalidInput(f"cannot serialize non-finite float {x}")
    text = "%.17g" % float(x)
    return text


def _emit(value: Any, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        out.append(format_float(float(value)))
    elif isinstance(value, str):
        out.append('"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(value, dict):
        out.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                out.append(",")
            _emit(str(k), out)
            out.append(":")
            _emit(v, out)
        out.append("}")
    elif isinstance(value, (list, tuple)) or isinstance(value, np.ndarray):
        seq = value.tolist() if isinstance(value, np.ndarray) else value
        out.append("[")
        for i, v in enumerate(seq):
            if i:
                out.append(",")
            _emit(v, out)
        out.append("]")
    else:
        raise InvalidInput(f"cannot serialize value of type {type(value).__name__}")


def canonical_json(value: Any) -> str:
    """Compact deterministic JSON text (no trailing newline)."""
    out: list[str] = []
    _emit(value, out)
    return "".join(out)


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a torn file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, value: Any) -> None:
    atomic_write_text(path, canonical_json(value) + "\n")


def write_json_lines(path: str, values) -> None:
    atomic_write_text(path, "".join(canonical_json(v) + "\n" for v in values))


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def ball_to_dict(ball: GranularBall) -> dict:
    entry = {
        "members": [int(m) for m in ball.members],
        "center": [float(c) for c in ball.center],
        "radius": float(ball.radius),
    }
    if ball.label is not None:
        entry["label"] = int(ball.label)
    if ball.purity is not None:
        entry["purity"] = float(ball.purity)
    return entry


def ball_set_to_dict(ball_set: BallSet) -> dict:
    return {
        "balls": [ball_to_dict(b) for b in ball_set.balls],
        "threshold": ball_set.purity_threshold,
        "seed": int(ball_set.seed),
        "radius_mode": ball_set.radius_mode.value,
    }
