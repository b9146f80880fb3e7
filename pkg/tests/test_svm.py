import numpy as np
import pytest

from gbtk import svm
from gbtk.core import Dataset
from gbtk.errors import DimensionError, InvalidInput, SingleClass
from gbtk.splitting import SplitConfig, generate_classification_balls


def two_ball_fixture():
    # centers 0 and 3 on the x-axis, radii 0.5. Hard-margin optimum is
    # analytic: w = (1, 0), b = -1.5, objective 0.5, both constraints active
    # with equal multipliers alpha = 0.5.
    return [
        svm.BallSample([0.0, 0.0], 0.5, -1),
        svm.BallSample([3.0, 0.0], 0.5, 1),
    ]


def test_two_ball_analytic_optimum():
    # tolerances reflect subgradient-method accuracy (objective error
    # O(log t / t)); the analytic objective value is 0.5
    model = svm.train_primal(two_ball_fixture(), C=10.0)
    assert model.w[0] == pytest.approx(1.0, abs=0.2)
    assert model.w[1] == pytest.approx(0.0, abs=0.1)
    assert model.b == pytest.approx(-1.5, abs=0.3)
    assert model.objective_trace[-1] == pytest.approx(0.5, abs=0.01)


def test_two_ball_hard_margin():
    # the continuation ladder to C=1e6 has 7 stages, so give it more
    # iterations than the default split allows
    model = svm.train_primal(
        two_ball_fixture(), C=svm.HARD_MARGIN_C,
        opts=svm.SolverOptions(max_iters=200_000),
    )
    assert model.w[0] == pytest.approx(1.0, abs=0.1)
    assert model.b == pytest.approx(-1.5, abs=0.1)
    assert model.objective_trace[-1] == pytest.approx(0.5, abs=0.02)


def test_objective_trace_non_increasing():
    model = svm.train_primal(two_ball_fixture(), C=100.0)
    trace = model.objective_trace
    assert all(b <= a for a, b in zip(trace, trace[1:]))


def test_dual_recovery_analytic_alphas():
    balls = two_ball_fixture()
    model = svm.train_primal(balls, C=10.0)
    report = svm.recover_dual(model, balls)
    np.testing.assert_allclose(report.alphas, [0.5, 0.5], atol=5e-3)
    assert report.reconstruction_residual < 1e-3
    assert abs(report.sum_alpha_y) < 1e-6
    assert report.box_satisfied
    assert report.active_indices == (0, 1)


def test_zero_radius_matches_point_solver_signs():
    for seed in range(3):
        rng = np.random.default_rng(seed)
        n = 60
        X = np.vstack([
            rng.normal([-2.0, -1.0], 0.5, size=(n // 2, 2)),
            rng.normal([2.0, 1.0], 0.5, size=(n // 2, 2)),
        ])
        y = np.array([0] * (n // 2) + [1] * (n // 2))
        ds = Dataset(X, y)
        ball_set = generate_classification_balls(ds, SplitConfig())
        samples = svm.balls_to_samples(ds, ball_set, positive_label=1)
        zero_r = [svm.BallSample(s.center, 0.0, s.y) for s in samples]
        points = [svm.BallSample(X[i], 0.0, 1 if y[i] == 1 else -1) for i in range(n)]
        m_balls = svm.train_primal(zero_r, C=10.0)
        m_points = svm.train_primal(points, C=10.0)
        np.testing.assert_array_equal(
            svm.predict_many(m_balls, X), svm.predict_many(m_points, X)
        )


def test_unit_membership_is_bit_identical_to_default():
    balls = two_ball_fixture()
    explicit = [svm.BallSample(b.center, b.radius, b.y, 1.0) for b in balls]
    m1 = svm.train_primal(balls, C=10.0)
    m2 = svm.train_primal(explicit, C=10.0)
    assert np.array_equal(m1.w, m2.w)
    assert m1.b == m2.b


def test_membership_scales_dual_box():
    balls = [
        svm.BallSample([0.0, 0.0], 0.2, -1, 0.3),
        svm.BallSample([0.4, 0.0], 0.2, 1, 1.0),
        svm.BallSample([-2.0, 0.0], 0.1, -1, 1.0),
        svm.BallSample([2.4, 0.0], 0.1, 1, 1.0),
    ]
    model = svm.train_primal(balls, C=5.0)
    report = svm.recover_dual(model, balls)
    assert report.box_satisfied
    assert np.all(report.alphas <= np.array([0.3, 1.0, 1.0, 1.0]) * 5.0 + 1e-9)


def test_predict_boundary_is_positive():
    model = svm.LinearBallModel(
        w=np.array([1.0, 0.0]), b=0.0, C=1.0, alphas=None,
        deltas=np.ones(2), objective_trace=(),
    )
    assert svm.predict(model, [0.0, 5.0]) == 1
    assert svm.predict(model, [-0.1, 0.0]) == -1
    with pytest.raises(DimensionError):
        svm.predict(model, [0.0])


def test_training_input_validation():
    with pytest.raises(SingleClass):
        svm.train_primal([svm.BallSample([0.0], 0.0, 1)] * 2, C=1.0)
    with pytest.raises(InvalidInput):
        svm.train_primal(two_ball_fixture(), C=0.0)
    with pytest.raises(InvalidInput):
        svm.train_primal([], C=1.0)
    with pytest.raises(InvalidInput):
        svm.BallSample([0.0], -1.0, 1)
    with pytest.raises(InvalidInput):
        svm.BallSample([0.0], 0.0, 2)
    with pytest.raises(InvalidInput):
        svm.BallSample([0.0], 0.0, 1, 0.0)


def test_ball_membership_modes():
    ds = Dataset(np.array([[0.0], [1.0], [2.0]]), labels=[0, 0, 1])
    from gbtk.core import GranularBall
    ball = GranularBall.from_members(ds, [0, 1])
    assert svm.ball_membership(ds, ball, [0.4, 0.8, 1.0]) == pytest.approx(0.6)
    value = svm.ball_membership(
        ds, ball, lambda c: 0.25, mode=svm.MembershipMode.CENTER_VALUE
    )
    assert value == 0.25
    with pytest.raises(InvalidInput):
        svm.ball_membership(ds, ball, [0.5])  # wrong length
    with pytest.raises(InvalidInput):
        svm.ball_membership(ds, ball, [0.0, 0.0, 0.0])  # outside (0, 1]
    with pytest.raises(InvalidInput):
        svm.ball_membership(ds, ball, [0.5, 0.5, 0.5],
                            mode=svm.MembershipMode.CENTER_VALUE)
