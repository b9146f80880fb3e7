"""Figure rendering for 2-D datasets, ball coverings, and optimizer traces.

Uses the non-interactive Agg backend and writes PNG files next to the data
outputs; figures are a convenience view, the JSON/CSV artifacts remain the
canonical record.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .cluster import NOISE, Clustering
from .core import BallSet, Dataset


def _scatter_colored(ax, points: np.ndarray, ids: np.ndarray) -> None:
    uniq = [u for u in np.unique(ids) if u != NOISE]
    cmap = plt.get_cmap("tab10")
    for k, u in enumerate(uniq):
        mask = ids == u
        ax.scatter(points[mask, 0], points[mask, 1], s=8,
                   color=cmap(k % 10), label=str(u))
    mask = ids == NOISE
    if mask.any():
        ax.scatter(points[mask, 0], points[mask, 1], s=14, marker="x",
                   color="black", label="noise")


def render_ball_set(dataset: Dataset, ball_set: BallSet, path: str,
                    title: str = "granular balls") -> None:
    """Scatter of the first two features with ball circles overlaid."""
    fig, ax = plt.subplots(figsize=(6, 6))
    pts = dataset.values[:, :2]
    ids = dataset.labels if dataset.is_labeled else np.zeros(dataset.n, dtype=int)
    _scatter_colored(ax, pts, ids)
    for ball in ball_set.balls:
        circle = plt.Circle(ball.center[:2], ball.radius, fill=False,
                            color="gray", linewidth=0.8, alpha=0.7)
        ax.add_patch(circle)
    ax.set_aspect("equal")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def render_clustering(dataset: Dataset, clustering: Clustering, path: str,
                      title: str = "overlap clustering") -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    _scatter_colored(ax, dataset.values[:, :2], clustering.labels)
    for ball, cid in zip(clustering.balls, clustering.ball_cluster):
        color = "black" if cid == NOISE else plt.get_cmap("tab10")(cid % 10)
        circle = plt.Circle(ball.center[:2], ball.radius, fill=False,
                            color=color, linewidth=0.8, alpha=0.6)
        ax.add_patch(circle)
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def render_optimize_trace(trace, path: str, title: str = "optimizer progress") -> None:
    """Best-so-far objective value against evaluation count (log y)."""
    values = np.array([entry.value for entry in trace])
    best = np.minimum.accumulate(values)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(1, len(best) + 1), best, linewidth=1.2)
    ax.set_xlabel("evaluations")
    ax.set_ylabel("best value")
    if np.all(best > 0):
        ax.set_yscale("log")
    ax.set_title(title)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
