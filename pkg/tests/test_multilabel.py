import numpy as np
import pytest
from hypothesis import given, strategies as st

from infloss.multilabel import (
    HammingBall,
    TagConstraint,
    ball_average_loss,
    ball_infimum_loss,
    ball_loss_table,
    ball_members,
    ball_predict,
    ball_supremum_loss,
    candidates,
    hamming,
    pn_loss,
    sign_predict,
    tag_scores,
    topk_predict,
)


def test_hamming_examples():
    y = np.array([1, -1, 1, 1])
    assert hamming(y, y) == 0
    assert hamming(y, -y) == 4
    z = y.copy()
    z[2] = -1
    assert hamming(y, z) == 1
    with pytest.raises(ValueError):
        hamming(y, y[:3])
    with pytest.raises(ValueError):
        hamming([0, 1], [1, 1])


def test_tag_scores_examples():
    np.testing.assert_allclose(tag_scores([1.0], [TagConstraint({0})], 3), [1, 0, 0])
    s = tag_scores([0.5, 0.5], [TagConstraint({0}), TagConstraint(N={0})], 3)
    assert s[0] == 0
    s = tag_scores([0.7, 0.3], [TagConstraint({0, 1}), TagConstraint(N={1})], 4)
    np.testing.assert_allclose(s, [0.7, 0.4, 0, 0])
    with pytest.raises(ValueError):
        TagConstraint({1}, {1})
    with pytest.raises(ValueError):
        tag_scores([1.0], [TagConstraint({5})], 3)


def test_sign_and_topk():
    np.testing.assert_array_equal(sign_predict([0.3, -0.2]), [1, -1])
    np.testing.assert_array_equal(sign_predict([0.3, 0.7], 0.5), [-1, 1])
    np.testing.assert_array_equal(sign_predict([0.5], 0.5), [-1])
    np.testing.assert_array_equal(topk_predict([0.2, 0.9, 0.5], 0), [-1, -1, -1])
    np.testing.assert_array_equal(topk_predict([0.2, 0.9, 0.5], 3), [1, 1, 1])
    np.testing.assert_array_equal(topk_predict([0.2, 0.9, 0.5], 2), [-1, 1, 1])
    np.testing.assert_array_equal(topk_predict([0.5, 0.5, 0.1], 1), [1, -1, -1])
    with pytest.raises(ValueError):
        topk_predict([0.1, 0.2], 3)


def test_ball_loss_examples():
    c = np.array([1, 1, 1])
    assert ball_infimum_loss(c, HammingBall(c, 2.5)) == 0
    assert ball_infimum_loss(-c, HammingBall(c, 1.5)) == 2
    assert ball_infimum_loss(-c, HammingBall(c, 3)) == 0
    assert ball_supremum_loss(c, HammingBall(c, 0)) == 0
    assert ball_supremum_loss(c, HammingBall(c, 2.7)) == 2
    assert ball_supremum_loss(-c, HammingBall(c, 1)) == 3
    assert ball_average_loss(-c, HammingBall(c, 0)) == 3
    assert ball_average_loss(c, HammingBall(c, 3)) == 1.5
    with pytest.raises(ValueError):
        HammingBall(c, -1)
    with pytest.raises(ValueError):
        ball_members(HammingBall(np.ones(13), 1))


def test_real_radius_equals_floor():
    c = np.array([1, -1, 1, -1])
    assert len(ball_members(HammingBall(c, 2.99))) == len(ball_members(HammingBall(c, 2)))


def test_candidates_order():
    np.testing.assert_array_equal(candidates(2), [[-1, -1], [-1, 1], [1, -1], [1, 1]])
    with pytest.raises(ValueError):
        candidates(21)


def brute(alpha, balls, rule):
    reduce = {"IL": min, "AC": np.mean, "SP": max}[rule]
    best, arg = np.inf, None
    m = balls[0].m
    for k in range(2 ** m):
        z = np.array([1 if (k >> (m - 1 - j)) & 1 else -1 for j in range(m)])
        v = 0.0
        for a, b in zip(alpha, balls):
            ys = [y for y in candidates(m) if hamming(y, b.center) <= b.radius]
            v += a * reduce([hamming(z, y) for y in ys])
        if arg is None or v < best - 1e-12 * (1 + abs(best)):
            best, arg = v, z
    return arg


def test_single_ball_il_tie_is_lexicographic():
    c = np.array([1, 1, -1, 1])
    z = ball_predict([1.0], [HammingBall(c, 1)], "IL")
    np.testing.assert_array_equal(z, [-1, 1, -1, 1])


def test_radius_zero_rules_agree():
    rng = np.random.default_rng(0)
    balls = [HammingBall(rng.choice([-1, 1], 5), 0) for _ in range(7)]
    alpha = rng.random(7)
    preds = {r: tuple(ball_predict(alpha, balls, r)) for r in ("IL", "AC", "SP")}
    assert len(set(preds.values())) == 1


@pytest.mark.parametrize("rule", ["IL", "AC", "SP"])
def test_matches_bruteforce_m6(rule):
    rng = np.random.default_rng(42)
    balls = [HammingBall(rng.choice([-1, 1], 6), rng.uniform(0, 4)) for _ in range(5)]
    alpha = rng.standard_normal(5)
    np.testing.assert_array_equal(ball_predict(alpha, balls, rule), brute(alpha, balls, rule))


def test_caps_are_errors():
    with pytest.raises(ValueError):
        ball_predict([1.0], [HammingBall(np.ones(13), 1)], "AC")
    with pytest.raises(ValueError):
        ball_predict([1.0], [HammingBall(np.ones(21), 1)], "IL")


balls_and_z = st.integers(1, 8).flatmap(lambda m: st.tuples(
    st.lists(st.sampled_from([-1, 1]), min_size=m, max_size=m),
    st.lists(st.sampled_from([-1, 1]), min_size=m, max_size=m),
    st.floats(0, m + 1.5)))


@given(balls_and_z)
def test_closed_forms_match_enumeration(args):
    z, c, r = (np.array(args[0]), np.array(args[1]), args[2])
    ball = HammingBall(c, r)
    d = [hamming(z, y) for y in candidates(c.size) if hamming(y, c) <= r]
    assert ball_infimum_loss(z, ball) == min(d)
    assert ball_supremum_loss(z, ball) == max(d)
    assert ball_average_loss(z, ball) == pytest.approx(np.mean(d))
    assert min(d) <= np.mean(d) <= max(d)


@given(st.integers(1, 6), st.floats(0, 6))
def test_average_monotone_in_distance(m, r):
    c = np.ones(m, dtype=int)
    vals = []
    for h in range(m + 1):
        z = c.copy()
        z[:h] = -1
        vals.append(ball_average_loss(z, HammingBall(c, r)))
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_table_matches_pointwise():
    rng = np.random.default_rng(5)
    balls = [HammingBall(rng.choice([-1, 1], 4), rng.uniform(0, 3)) for _ in range(3)]
    T = ball_loss_table(balls, "AC")
    for k, z in enumerate(candidates(4)):
        for i, b in enumerate(balls):
            assert T[i, k] == pytest.approx(ball_average_loss(z, b))


@st.composite
def pn_instances(draw):
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 5))
    cons = []
    for _ in range(n):
        lab = draw(st.lists(st.sampled_from([-1, 0, 1]), min_size=m, max_size=m))
        cons.append(TagConstraint({j for j, v in enumerate(lab) if v == 1},
                                  {j for j, v in enumerate(lab) if v == -1}))
    alpha = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    return m, cons, np.array(alpha)


@given(pn_instances())
def test_pn_rules_share_argmin_and_decouple(inst):
    m, cons, alpha = inst
    C = candidates(m)
    preds = {}
    for rule in ("IL", "AC", "SP"):
        vals = np.array([sum(a * pn_loss(z, c, rule) for a, c in zip(alpha, cons)) for z in C])
        preds[rule] = vals
    # the rules differ by a constant per sample, so the value profiles are shifts of each other
    for rule in ("AC", "SP"):
        diff = preds[rule] - preds["IL"]
        assert np.ptp(diff) <= 1e-9
    s = tag_scores(alpha, cons, m)
    z = sign_predict(s)
    best = preds["IL"].min()
    val = sum(a * pn_loss(z, c, "IL") for a, c in zip(alpha, cons))
    assert val <= best + 1e-9
