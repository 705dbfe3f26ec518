import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infloss.kendall import PartialOrder, kendall_embed, n_pairs, ranks_from_ordering
from infloss.ranking import (
    AlternationResult,
    ac_center_ranking,
    ac_predict_ranking,
    alternate_minimization,
    exact_predict_ranking,
    exact_risks_ranking,
    il_predict_ranking,
    sp_predict_ranking,
)

A = np.array([0, 1, 2])
C = np.array([0, 2, 1])
# 0 before 2 (consistent with a, b and c) and the total order of c
INCONSISTENT = ([0.9, 0.1], [PartialOrder.from_pairs(3, [(0, 2)]),
                             PartialOrder.total(ranks_from_ordering([0, 2, 1]))])


def random_instance(rng, m=None, signed=True):
    m = int(rng.integers(3, 7)) if m is None else m
    n = int(rng.integers(1, 7))
    sets = []
    for _ in range(n):
        sigma = rng.permutation(m)
        pairs = [(a, b) for a in range(m) for b in range(m)
                 if sigma[a] < sigma[b] and rng.random() < 0.3]
        sets.append(PartialOrder.from_pairs(m, pairs))
    alpha = rng.standard_normal(n) if signed else rng.random(n)
    return alpha, sets


def test_exact_rules_on_inconsistent_instance():
    alpha, sets = INCONSISTENT
    np.testing.assert_array_equal(exact_predict_ranking(alpha, sets, "IL"), C)
    np.testing.assert_array_equal(exact_predict_ranking(alpha, sets, "AC"), A)
    np.testing.assert_array_equal(exact_predict_ranking(alpha, sets, "SP"), A)


def test_il_alternation_on_inconsistent_instance():
    alpha, sets = INCONSISTENT
    res = alternate_minimization(alpha, sets, "IL")
    assert res.converged and not res.stalled
    np.testing.assert_array_equal(res.z, C)


def test_ac_sampling_on_inconsistent_instance():
    alpha, sets = INCONSISTENT
    z = ac_predict_ranking(alpha, sets, n_samples=100, rng=np.random.default_rng(0))
    np.testing.assert_array_equal(z, A)


def test_sp_alternation_stalls_on_inconsistent_instance():
    # the saddle search cycles here and never reaches the exact SP answer
    alpha, sets = INCONSISTENT
    z, stalled = sp_predict_ranking(alpha, sets)
    assert stalled
    np.testing.assert_array_equal(z, C)


def test_total_orders_one_iteration():
    rng = np.random.default_rng(1)
    sets = [PartialOrder.total(rng.permutation(5)) for _ in range(4)]
    alpha = rng.dirichlet(np.ones(4))
    res = alternate_minimization(alpha, sets)
    assert res.converged and res.iterations == 1
    np.testing.assert_array_equal(res.z, exact_predict_ranking(alpha, sets, "IL"))
    z_sp, stalled = sp_predict_ranking(alpha, sets)
    assert not stalled
    np.testing.assert_array_equal(z_sp, res.z)


def test_empty_order_gives_identity():
    res = alternate_minimization([1.0], [PartialOrder.empty(4)])
    assert res.converged
    np.testing.assert_array_equal(res.z, np.arange(4))
    np.testing.assert_array_equal(res.ys[0], kendall_embed(np.arange(4)))


def test_zero_weight_keeps_y():
    sets = [PartialOrder.from_pairs(3, [(2, 0)]), PartialOrder.empty(3)]
    res = alternate_minimization([1.0, 0.0], sets)
    np.testing.assert_array_equal(res.ys[1], [0, 0, 0])


def test_ac_centers():
    S = PartialOrder.total(np.array([2, 0, 1]))
    np.testing.assert_array_equal(ac_center_ranking(S, 1), kendall_embed([2, 0, 1]))
    c = ac_center_ranking(PartialOrder.empty(3), 500, np.random.default_rng(0))
    assert np.max(np.abs(c)) <= 0.15
    # each distinct permutation counts once, so two samples of one order give its embedding
    S = PartialOrder.from_pairs(3, [(0, 1), (1, 2)])
    np.testing.assert_array_equal(ac_center_ranking(S, 50, np.random.default_rng(0)), [-1, -1, -1])
    with pytest.raises(ValueError):
        ac_center_ranking(S, 0)


def test_input_validation():
    with pytest.raises(ValueError):
        alternate_minimization([1.0], [PartialOrder.empty(3)], mode="XX")
    with pytest.raises(ValueError):
        alternate_minimization([1.0, 1.0], [PartialOrder.empty(3)])
    with pytest.raises(ValueError):
        alternate_minimization([1.0, 1.0], [PartialOrder.empty(3), PartialOrder.empty(4)])


def test_exact_risks_rule_order():
    rng = np.random.default_rng(3)
    for _ in range(50):
        alpha, sets = random_instance(rng, m=4, signed=False)
        il, ac, sp = (exact_risks_ranking(alpha, sets, r) for r in ("IL", "AC", "SP"))
        assert np.all(il <= ac + 1e-9) and np.all(ac <= sp + 1e-9)


def test_monotone_objective_seeded():
    rng = np.random.default_rng(4)
    for _ in range(200):
        alpha, sets = random_instance(rng)
        res = alternate_minimization(alpha, sets)
        J = [v for _, v in res.trace]
        assert all(b >= a - 1e-9 for a, b in zip(J, J[1:]))


@settings(max_examples=50)
@given(st.integers(0, 2 ** 32 - 1))
def test_final_prediction_no_worse_than_first(seed):
    alpha, sets = random_instance(np.random.default_rng(seed), signed=False)
    res = alternate_minimization(alpha, sets)
    first = alternate_minimization(alpha, sets, max_iters=1)
    R = exact_risks_ranking(alpha, sets, "IL")
    from infloss.fas import all_permutations
    perms, _ = all_permutations(sets[0].m)
    idx = {tuple(p): k for k, p in enumerate(perms)}
    assert R[idx[tuple(res.z)]] <= R[idx[tuple(first.z)]] + 1e-9


def test_large_m_uses_lp_path():
    rng = np.random.default_rng(5)
    alpha, sets = random_instance(rng, m=8)
    z = il_predict_ranking(alpha, sets, max_iters=3)
    assert sorted(z) == list(range(8))
    assert isinstance(alternate_minimization(alpha, sets, max_iters=2), AlternationResult)
    assert n_pairs(8) == 28
