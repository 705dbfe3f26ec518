"""Partial-label classification under the 0-1 loss.

Candidate sets are boolean rows: ``sets[i, z]`` is True when class ``z`` is
a candidate for sample ``i``.  Each inference rule reduces to the argmin of
``alpha @ L`` for a fixed ``(n, m)`` loss table ``L``:

* IL  ``L[i, z] = 1{z not in S_i}``
* AC  ``L[i, z] = 1 - 1{z in S_i} / |S_i|``
* SP  ``L[i, z] = 1{S_i != {z}}``

so batch prediction goes through ``beta = (K + n lam I)^{-1} L`` once.
Ties resolve to the smallest class index.
"""

import numpy as np

from .kernel import fit_ridge, train_scores

__all__ = [
    "RULES",
    "as_label_sets",
    "loss01",
    "il_infimum_loss",
    "loss_table",
    "il_predict",
    "ac_predict",
    "sp_predict",
    "argmin_rows",
    "PartialLabelClassifier",
]

RULES = ("IL", "AC", "SP")


def as_label_sets(sets, m=None):
    """Boolean ``(n, m)`` matrix from a boolean array or a list of iterables."""
    if isinstance(sets, np.ndarray) and sets.dtype == bool:
        S = sets
        if S.ndim == 1:
            S = S[None, :]
    else:
        sets = list(sets)
        if m is None:
            m = 1 + max(max(s) for s in sets)
        S = np.zeros((len(sets), m), dtype=bool)
        for i, s in enumerate(sets):
            S[i, list(s)] = True
    if m is not None and S.shape[1] != m:
        raise ValueError(f"label sets cover {S.shape[1]} classes, expected {m}")
    if not S.any(axis=1).all():
        raise ValueError("every label set must be non-empty")
    return S


def loss01(z, y):
    return int(z != y)


def il_infimum_loss(z, S):
    """``1{z not in S}`` for a set given as an iterable or a boolean mask."""
    S = np.asarray(S)
    if S.dtype == bool:
        if not S.any():
            raise ValueError("empty label set")
        return int(not S[z])
    if S.size == 0:
        raise ValueError("empty label set")
    return int(z not in set(S.tolist()))


def loss_table(sets, rule="IL"):
    S = as_label_sets(sets)
    if rule == "IL":
        return (~S).astype(float)
    if rule == "AC":
        return 1.0 - S / S.sum(axis=1, keepdims=True)
    if rule == "SP":
        single = S.sum(axis=1) == 1
        return 1.0 - (S & single[:, None])
    raise ValueError(f"rule must be one of {RULES}, got {rule!r}")


def argmin_rows(R, tol=1e-12):
    """Row-wise argmin with ties going to the smallest column."""
    R = np.atleast_2d(R)
    best = R.min(axis=1, keepdims=True)
    return np.argmax(R <= best + tol * (1.0 + np.abs(best)), axis=1)


def _predict(alpha, sets, rule):
    L = loss_table(sets, rule)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (L.shape[0],):
        raise ValueError(f"{alpha.size} weights for {L.shape[0]} sets")
    return int(argmin_rows(alpha @ L)[0])


def il_predict(alpha, sets):
    """Class with the largest total weight among the sets containing it."""
    return _predict(alpha, sets, "IL")


def ac_predict(alpha, sets):
    """Like :func:`il_predict` with each weight divided by its set size."""
    return _predict(alpha, sets, "AC")


def sp_predict(alpha, sets, return_flag=False):
    """Only singleton sets vote.

    With no singleton among ``sets`` the risk is flat and class 0 is
    returned; ``return_flag=True`` also returns whether the prediction was
    informative.
    """
    S = as_label_sets(sets)
    z = _predict(alpha, S, "SP")
    if return_flag:
        return z, bool((S.sum(axis=1) == 1).any())
    return z


class PartialLabelClassifier:
    """Kernel ridge partial-label classifier.

    Parameters
    ----------
    sigma : float
        Gaussian bandwidth.
    lam : float
        Ridge parameter (the shift is ``n * lam``).
    rules : sequence of str
        Inference rules prepared at fit time.
    """

    def __init__(self, sigma, lam, rules=RULES, kernel=None):
        self.sigma = sigma
        self.lam = lam
        self.rules = tuple(rules)
        self.kernel = kernel

    def fit(self, X, sets):
        S = as_label_sets(sets)
        self.model_ = fit_ridge(X, self.sigma, self.lam, self.kernel)
        self.betas_ = {r: train_scores(self.model_, loss_table(S, r)) for r in self.rules}
        self.n_classes_ = S.shape[1]
        return self

    def risk_scores(self, Xq, rule="IL"):
        """Estimated risk of each class at each query (lower is better)."""
        return self.model_.kernel_vector(Xq) @ self.betas_[rule]

    def predict(self, Xq, rule="IL"):
        return argmin_rows(self.risk_scores(Xq, rule))
