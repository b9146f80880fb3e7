"""Unsupervised granular-ball clustering.

Balls are grown top-down with a deterministic two-center split: the first
seed is the member farthest from the ball center, the second the member
farthest from the first. A split is kept only while it strictly improves the
size-weighted mean within-ball distance and the ball is large enough to be
worth dividing. Final balls are then joined into clusters wherever their
boundaries touch (center distance <= r_i + r_j + slack); connected
components of that overlap graph are the clusters, and balls left as
singleton points are reported as noise.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .core import Dataset, GranularBall, RadiusMode, normalize_ball_order
from .errors import InvalidInput, SplitStalled

NOISE = -1


@dataclass(frozen=True)
class ClusterConfig:
    radius_mode: RadiusMode = RadiusMode.AVERAGE
    overlap_radius_mode: RadiusMode = RadiusMode.MAXIMUM
    min_split_size: int | None = None
    overlap_slack: float = 0.0
    max_split_iters: int = 10000
    seed: int = 0

    def __post_init__(self):
        if self.min_split_size is not None and self.min_split_size < 2:
            raise InvalidInput("min_split_size must be >= 2")
        if self.overlap_slack < 0:
            raise InvalidInput("overlap_slack must be >= 0")

    def effective_min_split_size(self, n: int) -> int:
        """Default split floor: ceil(sqrt(n)).

        Without a floor the weighted-quality rule keeps splitting almost
        every ball down to singletons, because splitting essentially always
        lowers the size-weighted mean distance.
        """
        if self.min_split_size is not None:
            return self.min_split_size
        return max(2, math.ceil(math.sqrt(n)))


def ball_quality_cluster(dataset: Dataset, members) -> float:
    """Mean member-to-centroid distance; 0 for singletons."""
    idx = np.asarray(members, dtype=int)
    if idx.size == 0:
        raise InvalidInput("cannot score an empty member list")
    center = dataset.values[idx].mean(axis=0)
    return float(np.linalg.norm(dataset.values[idx] - center, axis=1).mean())


def split_two(dataset: Dataset, members) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic farthest-point two-way split of a member list.

    Seed one is the member farthest from the centroid, seed two the member
    farthest from seed one; every member joins its nearer seed. All distance
    ties resolve to the lowest row index (and to seed one on assignment),
    so the partition depends only on the data.
    """
    idx = np.asarray(sorted(members), dtype=int)
    if idx.size < 2:
        raise SplitStalled("need at least two members to split")
    points = dataset.values[idx]
    center = points.mean(axis=0)
    d0 = np.linalg.norm(points - center, axis=1)
    s1 = int(np.argmax(d0))
    d1 = np.linalg.norm(points - points[s1], axis=1)
    s2 = int(np.argmax(d1))
    if s2 == s1:
        raise SplitStalled("all members coincide; nothing to split")
    d2 = np.linalg.norm(points - points[s2], axis=1)
    to_first = d1 <= d2
    first = idx[to_first]
    second = idx[~to_first]
    if first.size == 0 or second.size == 0:
        raise SplitStalled("two-center assignment collapsed onto one child")
    return first, second


def should_split(dataset: Dataset, members, children, min_split_size: int) -> bool:
    """Keep a split only if the size-weighted child quality strictly improves."""
    idx = np.asarray(members, dtype=int)
    if idx.size < min_split_size:
        return False
    parent_q = ball_quality_cluster(dataset, idx)
    total = sum(len(ch) for ch in children)
    weighted = sum(
        (len(ch) / total) * ball_quality_cluster(dataset, ch) for ch in children
    )
    return weighted < parent_q


def generate_cluster_balls(dataset: Dataset, config: ClusterConfig = ClusterConfig(),
                           on_split=None) -> list[GranularBall]:
    """Top-down two-way splitting until no ball profits from dividing.

    ``on_split``, when given, is called as
    ``on_split(parent_members, children, parent_quality, weighted_child_quality)``
    for every *accepted* split, so callers can audit the stop rule.
    """
    min_split = config.effective_min_split_size(dataset.n)
    final: list[GranularBall] = []
    heap: list[tuple[int, int, np.ndarray]] = []
    counter = 0
    heapq.heappush(heap, (-dataset.n, counter, np.arange(dataset.n)))
    iters = 0
    while heap:
        _, _, members = heapq.heappop(heap)
        done = iters >= config.max_split_iters or members.size < min_split
        children = None
        if not done:
            try:
                children = split_two(dataset, members)
            except SplitStalled:
                done = True
        if not done and not should_split(dataset, members, children, min_split):
            done = True
        if done:
            final.append(GranularBall.from_members(dataset, members, config.radius_mode))
            continue
        if on_split is not None:
            total = sum(len(ch) for ch in children)
            weighted = sum(
                (len(ch) / total) * ball_quality_cluster(dataset, ch) for ch in children
            )
            on_split(members, children, ball_quality_cluster(dataset, members), weighted)
        iters += 1
        for child in children:
            counter += 1
            heapq.heappush(heap, (-len(child), counter, child))
    return list(normalize_ball_order(final))


@dataclass(frozen=True)
class OverlapGraph:
    edges: tuple[tuple[int, int], ...]
    n_balls: int


def build_overlap_graph(dataset: Dataset, balls: list[GranularBall],
                        config: ClusterConfig = ClusterConfig()) -> OverlapGraph:
    """Edge between balls whose boundaries touch within the slack.

    Overlap is judged with the configured overlap radius mode (maximum by
    default), recomputed from the members, so a tight average-radius ball
    still connects to a neighbour its farthest member reaches.
    """
    radii = np.empty(len(balls))
    centers = np.stack([b.center for b in balls]) if balls else np.empty((0, dataset.d))
    for i, ball in enumerate(balls):
        if config.overlap_radius_mode is ball.radius_mode:
            radii[i] = ball.radius
        else:
            dists = np.linalg.norm(dataset.values[list(ball.members)] - ball.center, axis=1)
            radii[i] = dists.max() if config.overlap_radius_mode is RadiusMode.MAXIMUM else dists.mean()
    edges = []
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            gap = float(np.linalg.norm(centers[i] - centers[j])) - radii[i] - radii[j]
            if gap <= config.overlap_slack:
                edges.append((i, j))
    return OverlapGraph(edges=tuple(edges), n_balls=len(balls))


@dataclass(frozen=True)
class Clustering:
    balls: tuple[GranularBall, ...]
    ball_cluster: tuple[int, ...]
    labels: np.ndarray
    noise_points: tuple[int, ...]

    @property
    def n_clusters(self) -> int:
        return len({c for c in self.ball_cluster if c != NOISE})


def extract_clusters(dataset: Dataset, balls: list[GranularBall],
                     graph: OverlapGraph) -> Clustering:
    """Connected components of the overlap graph, singleton balls as noise.

    Cluster ids are assigned in order of the smallest sample index each
    cluster contains, so the labeling is independent of ball enumeration.
    """
    parent = list(range(len(balls)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in graph.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(len(balls)):
        groups.setdefault(find(i), []).append(i)

    # singleton balls that connect to nothing are noise points
    noise_points: list[int] = []
    real_groups = []
    for members in groups.values():
        if len(members) == 1 and balls[members[0]].is_singleton:
            noise_points.extend(balls[members[0]].members)
        else:
            real_groups.append(members)

    real_groups.sort(key=lambda g: min(balls[i].members[0] for i in g))
    ball_cluster = [NOISE] * len(balls)
    labels = np.full(dataset.n, NOISE, dtype=int)
    for cid, group in enumerate(real_groups):
        for i in group:
            ball_cluster[i] = cid
            for m in balls[i].members:
                labels[m] = cid
    return Clustering(
        balls=tuple(balls),
        ball_cluster=tuple(ball_cluster),
        labels=labels,
        noise_points=tuple(sorted(noise_points)),
    )


def cluster(dataset: Dataset, config: ClusterConfig = ClusterConfig()) -> Clustering:
    """Full pipeline: grow balls, link overlaps, read off components."""
    balls = generate_cluster_balls(dataset, config)
    graph = build_overlap_graph(dataset, balls, config)
    return extract_clusters(dataset, balls, graph)
