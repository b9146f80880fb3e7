import numpy as np
import pytest

from gbtk import knn
from gbtk.core import Dataset
from gbtk.errors import DimensionError, EmptyModel
from gbtk.splitting import SplitConfig


def fitted_model():
    values = np.array([
        [0.0, 0.0], [0.0, 2.0],      # ball A: center (0,1), radius 1, label 0
        [10.0, 0.0], [10.0, 2.0],    # ball B: center (10,1), radius 1, label 1
    ])
    ds = Dataset(values, labels=[0, 0, 1, 1])
    return knn.fit(ds, SplitConfig())


def test_predict_by_boundary_distance():
    model = fitted_model()
    assert knn.predict(model, [1.0, 1.0]) == 0
    assert knn.predict(model, [9.0, 1.0]) == 1


def test_inside_ball_score_is_negative_and_wins():
    model = fitted_model()
    # (0.5, 1): 0.5 - 1 = -0.5 to ball A vs 9.5 - 1 = 8.5 to ball B
    assert knn.predict(model, [0.5, 1.0]) == 0


def test_boundary_tie_prefers_earlier_ball():
    # midpoint (5,1) is 5-1=4 from both boundaries; ball with member 0 wins
    model = fitted_model()
    assert knn.predict(model, [5.0, 1.0]) == 0


def test_predict_many_matches_scalar_predict():
    model = fitted_model()
    rng = np.random.default_rng(3)
    queries = rng.uniform(-2, 12, size=(25, 2))
    batch = knn.predict_many(model, queries)
    assert list(batch) == [knn.predict(model, q) for q in queries]


def test_all_singletons_raises_empty_model():
    ds = Dataset(np.array([[0.0], [1.0], [2.0]]), labels=[0, 1, 2])
    with pytest.raises(EmptyModel):
        knn.fit(ds, SplitConfig())


def test_dimension_mismatch():
    model = fitted_model()
    with pytest.raises(DimensionError):
        knn.predict(model, [1.0, 2.0, 3.0])
    with pytest.raises(DimensionError):
        knn.predict_many(model, np.zeros((4, 3)))


def test_noisy_point_absorbed_by_filtering():
    # one mislabeled point far from its class becomes a singleton and is dropped
    values = np.vstack([
        np.random.default_rng(0).normal([0, 0], 0.1, size=(10, 2)),
        np.random.default_rng(1).normal([5, 5], 0.1, size=(10, 2)),
        [[5.0, 5.05]],
    ])
    labels = [0] * 10 + [1] * 10 + [0]
    ds = Dataset(values, labels=labels)
    model = knn.fit(ds, SplitConfig())
    assert knn.predict(model, [5.0, 5.0]) == 1
