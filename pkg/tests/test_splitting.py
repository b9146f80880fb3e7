import numpy as np
import pytest

from gbtk.core import Dataset
from gbtk.data import make_synthetic
from gbtk.errors import InvalidInput, SplitStalled
from gbtk.splitting import (
    PURITY_GRID,
    SplitConfig,
    Splitter,
    adaptive_purity_search,
    filter_noise_balls,
    generate_classification_balls,
    split_once,
)


def two_cluster_dataset():
    # two tight, label-aligned clusters far apart
    values = np.array([
        [0.0, 0.0], [0.1, 0.0], [0.0, 0.1],
        [10.0, 10.0], [10.1, 10.0], [10.0, 10.1],
    ])
    return Dataset(values, labels=[0, 0, 0, 1, 1, 1])


def test_generation_partitions_all_rows():
    ds = two_cluster_dataset()
    bs = generate_classification_balls(ds, SplitConfig())
    members = sorted(m for b in bs.balls for m in b.members)
    assert members == list(range(ds.n))


def test_separable_data_yields_two_pure_balls():
    ds = two_cluster_dataset()
    bs = generate_classification_balls(ds, SplitConfig(purity_threshold=1.0))
    assert len(bs) == 2
    assert all(b.purity == 1.0 for b in bs.balls)
    assert sorted(b.label for b in bs.balls) == [0, 1]


def test_threshold_one_balls_are_pure_or_singleton():
    ds = make_synthetic("fourclass_like", 300, 0.08, seed=4)
    bs = generate_classification_balls(ds, SplitConfig(purity_threshold=1.0))
    for ball in bs.balls:
        assert ball.purity == 1.0 or ball.is_singleton


def test_lower_threshold_never_yields_more_balls():
    ds = make_synthetic("fourclass_like", 300, 0.08, seed=7)
    coarse = generate_classification_balls(ds, SplitConfig(purity_threshold=0.7))
    fine = generate_classification_balls(ds, SplitConfig(purity_threshold=1.0))
    assert len(coarse) <= len(fine)


def test_generation_is_deterministic():
    ds = make_synthetic("fourclass_like", 200, 0.08, seed=1)
    a = generate_classification_balls(ds, SplitConfig())
    b = generate_classification_balls(ds, SplitConfig())
    assert len(a) == len(b)
    for x, y in zip(a.balls, b.balls):
        assert x.members == y.members
        np.testing.assert_array_equal(x.center, y.center)
        assert x.radius == y.radius


def test_split_once_single_label_stalls():
    ds = Dataset(np.random.default_rng(0).normal(size=(5, 2)), labels=[1] * 5)
    from gbtk.core import GranularBall
    ball = GranularBall.from_members(ds, range(5))
    with pytest.raises(SplitStalled):
        split_once(ds, ball, SplitConfig())


def test_coincident_points_with_mixed_labels_terminate():
    # geometry cannot separate coincident points, but the empty-cluster
    # repair still peels members off deterministically until every ball is
    # label-pure; the run must terminate and keep the partition intact
    ds = Dataset(np.zeros((4, 2)), labels=[0, 0, 1, 1])
    bs = generate_classification_balls(ds, SplitConfig(purity_threshold=1.0))
    members = sorted(m for b in bs.balls for m in b.members)
    assert members == [0, 1, 2, 3]
    assert all(b.purity == 1.0 for b in bs.balls)
    again = generate_classification_balls(ds, SplitConfig(purity_threshold=1.0))
    assert [b.members for b in again.balls] == [b.members for b in bs.balls]


def test_class_center_seeded_splitter():
    ds = two_cluster_dataset()
    bs = generate_classification_balls(
        ds, SplitConfig(splitter=Splitter.CLASS_CENTER_SEEDED)
    )
    assert len(bs) == 2
    assert all(b.purity == 1.0 for b in bs.balls)


def test_min_ball_size_finalizes_small_balls():
    ds = Dataset(np.array([[0.0], [0.01], [5.0], [5.01]]), labels=[0, 1, 0, 1])
    bs = generate_classification_balls(ds, SplitConfig(min_ball_size=2))
    assert all(b.size <= 2 or b.purity == 1.0 for b in bs.balls)


def test_filter_noise_balls_drops_singletons():
    ds = Dataset(np.array([[0.0], [0.1], [100.0]]), labels=[0, 0, 1])
    bs = generate_classification_balls(ds, SplitConfig())
    kept, removed = filter_noise_balls(bs)
    assert all(not b.is_singleton for b in kept.balls)
    assert all(b.is_singleton for b in removed)
    assert len(kept) + len(removed) == len(bs)


def test_config_validation():
    with pytest.raises(InvalidInput):
        SplitConfig(purity_threshold=0.0)
    with pytest.raises(InvalidInput):
        SplitConfig(purity_threshold=1.5)
    with pytest.raises(InvalidInput):
        SplitConfig(max_split_iters=0)
    with pytest.raises(InvalidInput):
        SplitConfig(min_ball_size=0)


def test_purity_grid_contents():
    assert PURITY_GRID == (0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0)


def test_adaptive_search_tie_prefers_larger_threshold():
    ds = two_cluster_dataset()
    t = adaptive_purity_search(ds, SplitConfig(), validator=lambda bs: 1.0)
    assert t == 1.0


def test_adaptive_search_maximizes_validator_over_grid():
    ds = make_synthetic("fourclass_like", 150, 0.08, seed=2)
    validator = lambda bs: -len(bs)
    t = adaptive_purity_search(ds, SplitConfig(), validator=validator)
    scores = {
        g: validator(generate_classification_balls(ds, SplitConfig(purity_threshold=g)))
        for g in PURITY_GRID
    }
    assert scores[t] == max(scores.values())
