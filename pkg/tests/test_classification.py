import numpy as np
import pytest
from hypothesis import given, strategies as st

from infloss.classification import (
    PartialLabelClassifier,
    ac_predict,
    argmin_rows,
    as_label_sets,
    il_infimum_loss,
    il_predict,
    loss01,
    loss_table,
    sp_predict,
)


def test_infimum_loss_examples():
    assert il_infimum_loss(2, [1, 2]) == 0
    assert il_infimum_loss(0, [1, 2]) == 1
    assert il_infimum_loss(1, np.array([False, True, False])) == 0
    with pytest.raises(ValueError):
        il_infimum_loss(0, [])
    assert loss01(1, 1) == 0 and loss01(1, 2) == 1


def test_loss_tables():
    S = as_label_sets([[0], [0, 1, 2]], 3)
    np.testing.assert_array_equal(loss_table(S, "IL"), [[0, 1, 1], [0, 0, 0]])
    np.testing.assert_allclose(loss_table(S, "AC"), [[0, 1, 1], [2 / 3, 2 / 3, 2 / 3]])
    np.testing.assert_array_equal(loss_table(S, "SP"), [[0, 1, 1], [1, 1, 1]])
    with pytest.raises(ValueError):
        loss_table(S, "XX")
    with pytest.raises(ValueError):
        as_label_sets(np.zeros((1, 3), dtype=bool))


def test_single_query_rules():
    sets = [[0, 1], [1, 2], [2]]
    alpha = [0.4, 0.35, 0.25]
    # IL: weights per class 0.4, 0.75, 0.6
    assert il_predict(alpha, sets) == 1
    # AC: 0.2, 0.375, 0.425
    assert ac_predict(alpha, sets) == 2
    z, informative = sp_predict(alpha, sets, return_flag=True)
    assert (z, informative) == (2, True)


def test_sp_without_singletons_is_flagged():
    z, informative = sp_predict([0.5, 0.5], [[0, 1], [1, 2]], return_flag=True)
    assert (z, informative) == (0, False)


def test_argmin_ties_smallest_index():
    np.testing.assert_array_equal(argmin_rows([[1.0, 0.0, 0.0], [2.0, 2.0, 3.0]]), [1, 0])


def test_classifier_recovers_separable_labels(rng):
    X = np.concatenate([rng.normal(-3, 0.3, (20, 2)), rng.normal(3, 0.3, (20, 2))])
    y = np.repeat([0, 1], 20)
    sets = np.zeros((40, 3), dtype=bool)
    sets[np.arange(40), y] = True
    sets[::2, 2] = True  # a spurious class half the time
    clf = PartialLabelClassifier(1.0, 1e-3).fit(X, sets)
    for rule in ("IL", "AC"):
        np.testing.assert_array_equal(clf.predict(X, rule), y)


@given(st.integers(2, 6), st.integers(1, 8), st.integers(0, 2 ** 16))
def test_batch_matches_single_query(m, n, seed):
    rng = np.random.default_rng(seed)
    S = rng.random((n, m)) < 0.5
    S[np.arange(n), rng.integers(0, m, n)] = True
    X = rng.normal(size=(n, 2))
    clf = PartialLabelClassifier(1.0, 0.1).fit(X, S)
    xq = rng.normal(size=(1, 2))
    alpha = clf.model_.solve(clf.model_.kernel_vector(xq)[0])
    for rule, single in (("IL", il_predict), ("AC", ac_predict)):
        R = clf.risk_scores(xq, rule)[0]
        # the single-query winner is optimal for the batch scores too
        assert R[single(alpha, S)] <= R.min() + 1e-8
