import numpy as np
import pytest
from hypothesis import given, strategies as st

from infloss.regression import (
    IntervalUnion,
    PartialRegressor,
    UnboundedSetError,
    ac_center,
    ac_predict_reg,
    farthest_sq_dist,
    il_predict_reg,
    nearest_sq_dist,
    objective,
    phase_loss_sets,
    piecewise_objective,
    sp_predict_reg,
)

GAP = IntervalUnion([-2.0, 1.0], [-1.0, 2.0])


def I(a, b):
    return IntervalUnion([a], [b])


def test_interval_union_validation():
    S = IntervalUnion.from_intervals([(1, 2), (0, 1.5), (4, 5)])
    np.testing.assert_array_equal(S.lo, [0, 4])
    np.testing.assert_array_equal(S.hi, [2, 5])
    for lo, hi in (([1.0], [0.0]), ([0.0, 1.0], [1.0, 2.0]), ([0.0, -np.inf], [1.0, 2.0]), ([], [])):
        with pytest.raises(ValueError):
            IntervalUnion(lo, hi)
    half = IntervalUnion([0.0], [np.inf])
    assert not half.bounded and half.contains(1e9)


def test_distance_examples():
    assert nearest_sq_dist(0.0, GAP) == 1.0
    assert nearest_sq_dist(1.5, GAP) == 0.0
    assert nearest_sq_dist(3.0, GAP) == 1.0
    assert farthest_sq_dist(0.0, I(-1, 1)) == 1.0
    assert farthest_sq_dist(2.0, I(-1, 1)) == 9.0
    with pytest.raises(UnboundedSetError):
        farthest_sq_dist(0.0, IntervalUnion([0.0], [np.inf]))


def test_il_examples():
    assert il_predict_reg([1.0], [I(1, 2)]) == 1.0
    assert il_predict_reg([0.5, 0.5], [IntervalUnion.point(0), IntervalUnion.point(2)]) == pytest.approx(1.0)
    # the objective is zero on all of [1.4, 1.6]; the flat minimum resolves to its left end
    z = il_predict_reg([1.0, 1.0], [GAP, I(1.4, 1.6)])
    assert z == pytest.approx(1.4, abs=1e-12)
    assert objective(1.5, [1.0, 1.0], [GAP, I(1.4, 1.6)])[0] == 0.0


def test_il_errors():
    with pytest.raises(UnboundedSetError):
        il_predict_reg([-1.0], [IntervalUnion([0.0], [np.inf])])
    with pytest.raises(ValueError):
        il_predict_reg([], [])
    # censored half-lines are fine with positive weight
    assert il_predict_reg([1.0, 1.0], [IntervalUnion([2.0], [np.inf]), I(0, 1)]) == pytest.approx(1.5)


def test_ac_examples():
    assert ac_center(GAP) == 0.0
    assert ac_center(I(1, 3)) == 2.0
    assert ac_center(IntervalUnion.point(0.0)) == 0.0
    assert ac_predict_reg([1.0], [I(1, 3)]) == 2.0
    assert ac_predict_reg([0.5, 0.5], [I(-3, -1), I(1, 3)]) == 0.0
    assert ac_predict_reg([0.25, 0.75], [I(-1, 1), I(3, 5)]) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        ac_predict_reg([1.0, -1.0], [I(0, 1), I(2, 3)])
    with pytest.raises(UnboundedSetError):
        ac_center(IntervalUnion([-np.inf], [0.0]))


def test_sp_examples():
    assert sp_predict_reg([1.0], [I(-1, 1)]) == pytest.approx(0.0, abs=1e-12)
    assert sp_predict_reg([1.0, 1.0], [I(-1, 1), I(-1, 1)]) == pytest.approx(0.0, abs=1e-12)
    assert sp_predict_reg([1.0, 1.0], [I(0, 2), I(4, 6)]) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        sp_predict_reg([-1.0], [I(0, 1)])
    with pytest.raises(UnboundedSetError):
        sp_predict_reg([1.0], [IntervalUnion([0.0], [np.inf])])


def test_phase_sets_examples():
    rng = np.random.default_rng(0)
    S = phase_loss_sets(2.0, 1.0, rng=rng)
    assert S.lo.size == 1 and S.contains(2.0) and S.lo[0] >= 0
    S = phase_loss_sets(-2.0, 1.0, rng=rng)
    assert S.lo.size == 1 and S.contains(-2.0) and S.hi[0] <= 0
    S = phase_loss_sets(3.0, 0.0, rng=rng)
    assert S.lo.size == 2 and S.contains(3.0) and S.contains(-3.0)
    S = phase_loss_sets(0.0, 0.5, rng=rng)
    assert S.lo.size == 1 and S.lo[0] == -S.hi[0]
    with pytest.raises(ValueError):
        phase_loss_sets(1.0, 1.5)


def random_instance(rng, signed=False):
    n = int(rng.integers(1, 6))
    sets = []
    for _ in range(n):
        k = int(rng.integers(1, 4))
        pts = np.sort(rng.uniform(-3, 3, 2 * k))
        # occasional degenerate points
        if rng.random() < 0.2:
            pts[1] = pts[0]
        sets.append(IntervalUnion.from_intervals(zip(pts[::2], pts[1::2])))
    alpha = rng.standard_normal(n) if signed else rng.random(n) + 0.01
    if signed and alpha.sum() <= 0.05:
        alpha[np.argmax(alpha)] += 1.0 - alpha.sum()
    return alpha, sets


def grid_minimum(alpha, sets, rule="IL"):
    lo = min(S.lo[0] for S in sets) - 1
    hi = max(S.hi[-1] for S in sets) + 1
    Z = np.arange(lo, hi + 1e-4, 1e-4)
    F = objective(Z, alpha, sets, rule)
    return Z, F


def test_il_matches_grid_oracle():
    rng = np.random.default_rng(7)
    for _ in range(500):
        alpha, sets = random_instance(rng)
        z = il_predict_reg(alpha, sets)
        Z, F = grid_minimum(alpha, sets)
        fz = objective(z, alpha, sets)[0]
        assert fz <= F.min() + 1e-6
        # the minimizer set may be flat; compare to the nearest grid minimizer
        near = Z[F <= F.min() + 1e-6]
        assert np.min(np.abs(near - z)) <= 1e-3


def test_signed_weights_match_grid_oracle():
    rng = np.random.default_rng(8)
    for _ in range(200):
        alpha, sets = random_instance(rng, signed=True)
        z = il_predict_reg(alpha, sets)
        Z, F = grid_minimum(alpha, sets)
        assert objective(z, alpha, sets)[0] <= F.min() + 1e-6


def test_sp_matches_grid_oracle():
    rng = np.random.default_rng(9)
    for _ in range(200):
        alpha, sets = random_instance(rng)
        z = sp_predict_reg(alpha, sets)
        Z, F = grid_minimum(alpha, sets, "SP")
        assert objective(z, alpha, sets, "SP")[0] <= F.min() + 1e-6


def test_il_beats_ac_on_its_objective():
    rng = np.random.default_rng(10)
    for _ in range(300):
        alpha, sets = random_instance(rng)
        zi, za = il_predict_reg(alpha, sets), ac_predict_reg(alpha, sets)
        assert objective(zi, alpha, sets)[0] <= objective(za, alpha, sets)[0] + 1e-9


def test_piecewise_continuity():
    rng = np.random.default_rng(11)
    for _ in range(200):
        alpha, sets = random_instance(rng, signed=True)
        for rule in ("IL",) if np.any(alpha < 0) else ("IL", "SP"):
            pq = piecewise_objective(alpha, sets, rule)
            assert np.all(pq.jumps() <= 1e-9)
            z = rng.uniform(-4, 4, 20)
            np.testing.assert_allclose(pq(z), objective(z, alpha, sets, rule), atol=1e-9)


@given(st.floats(-10, 10), st.floats(0, 1), st.floats(0.01, 3), st.floats(0.01, 3), st.integers(0, 2 ** 32 - 1))
def test_truth_containment(y, p, wl, wh, seed):
    S = phase_loss_sets(y, p, wl, wh, np.random.default_rng(seed))
    assert S.contains(y)


def test_regressor_recovers_full_supervision():
    rng = np.random.default_rng(0)
    x = rng.random((80, 1))
    y = np.sin(2 * np.pi * x[:, 0])
    sets = [IntervalUnion.point(v) for v in y]
    model = PartialRegressor(sigma=0.1, lam=1e-3).fit(x, sets)
    xq = np.linspace(0.1, 0.9, 9)[:, None]
    pred_il = model.predict(xq, "IL")
    pred_ac = model.predict(xq, "AC")
    np.testing.assert_allclose(pred_il, pred_ac, atol=1e-9)
    assert np.max(np.abs(pred_il - np.sin(2 * np.pi * xq[:, 0]))) < 0.1
