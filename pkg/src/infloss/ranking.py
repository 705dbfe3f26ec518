"""Ranking with the Kendall loss from partial orders.

With ``phi`` the Kendall embedding and ``m_e`` the number of pairs,
``loss(y, z) = m_e - <phi(y), phi(z)>``.  Minimizing the weighted infimum
loss ``sum_i alpha_i min_{y_i in S_i} loss(z, y_i)`` is therefore the joint
maximization of

    J(z, y) = sum_i alpha_i <phi(z), phi(y_i)>

over ``z`` and ``y_i in S_i``, carried out by alternating exact block
maximizations (each block is a feedback arc set problem).  The supremum
baseline alternates a maximization in ``z`` with a minimization in the
``y_i``, which has no monotone potential and can cycle.
"""

from dataclasses import dataclass, field

import numpy as np

from .fas import EXACT_DISPATCH_MAX_M, _feasible_rows, all_permutations, fas_solve
from .kendall import (  # noqa: F401  (re-exported)
    InconsistentOrderError,
    PartialOrder,
    kendall_embed,
    kendall_loss,
    n_pairs,
    transitive_closure,
)

__all__ = [
    "AlternationResult",
    "alternate_minimization",
    "il_predict_ranking",
    "sp_predict_ranking",
    "ac_center_ranking",
    "ac_centers",
    "ac_predict_ranking",
    "exact_risks_ranking",
    "exact_predict_ranking",
    "empirical_objective",
    "PartialOrder",
    "kendall_embed",
    "kendall_loss",
    "transitive_closure",
]

MAX_ITERS = 20
AC_SAMPLES = 100


@dataclass
class AlternationResult:
    """Outcome of an alternating scheme.

    ``trace`` lists ``(step, J)`` after the initial state and after every
    z-step and y-step, with ``step`` one of ``"init"``, ``"z"``, ``"y"``.
    ``stalled`` is True when the scheme ended without reaching a fixpoint
    (a revisited state or the iteration cap).
    """

    z: np.ndarray
    ys: np.ndarray
    iterations: int
    converged: bool
    stalled: bool
    trace: list = field(default_factory=list)


def _check(alpha, sets):
    if len(sets) == 0:
        raise ValueError("need at least one partial order")
    alpha = np.asarray(alpha, dtype=float).ravel()
    if alpha.size != len(sets):
        raise ValueError(f"{alpha.size} weights for {len(sets)} partial orders")
    m = sets[0].m
    if any(S.m != m for S in sets):
        raise ValueError("partial orders over different item counts")
    return alpha, m


def empirical_objective(alpha, z, ys):
    """``J = sum_i alpha_i <phi(z), y_i>`` for embedded ``ys`` of shape ``(n, m_e)``."""
    return float(alpha @ (np.asarray(ys, dtype=float) @ kendall_embed(z)))


def alternate_minimization(alpha, sets, mode="IL", max_iters=MAX_ITERS):
    """Alternate exact z-steps and y-steps.

    The y-vectors start at the partial-order vectors (unknown pairs at 0).
    A z-step solves the feedback arc set problem with ``c = -sum_i alpha_i y_i``.
    In ``"IL"`` mode each y-step maximizes ``alpha_i <phi(y_i), phi(z)>`` over
    ``S_i``; in ``"SP"`` mode it minimizes it.  Samples with ``alpha_i = 0``
    keep their current vector.
    """
    if mode not in ("IL", "SP"):
        raise ValueError(f"mode must be 'IL' or 'SP', got {mode!r}")
    alpha, m = _check(alpha, sets)
    sign = -1.0 if mode == "IL" else 1.0
    ys = np.array([S.vec for S in sets], dtype=float)
    z = None
    trace = []
    seen = set()
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        z_new = fas_solve(-(alpha @ ys), m=m).perm
        phi_z = kendall_embed(z_new).astype(float)
        if z is None:
            trace.append(("init", float(alpha @ (ys @ phi_z))))
        z = z_new
        trace.append(("z", float(alpha @ (ys @ phi_z))))
        ys_new = _y_step(ys, alpha, sets, phi_z, sign, m)
        trace.append(("y", float(alpha @ (ys_new @ phi_z))))
        state = z.tobytes() + ys_new.astype(np.int8).tobytes()
        if np.array_equal(ys_new, ys):
            converged = True
            ys = ys_new
            break
        ys = ys_new
        if state in seen:
            break
        seen.add(state)
    return AlternationResult(z, ys.astype(np.int8), it, converged, not converged, trace)


def _y_step(ys, alpha, sets, phi_z, sign, m):
    """Exact y-step.  Only the sign of ``alpha_i`` matters, so for small ``m``
    one score vector over all permutations serves every sample."""
    ys_new = ys.copy()
    if m > EXACT_DISPATCH_MAX_M:
        for i, S in enumerate(sets):
            if alpha[i] != 0:
                ys_new[i] = fas_solve(sign * alpha[i] * phi_z, S, m).vertex
        return ys_new
    _, emb = all_permutations(m)
    # FAS value of every permutation for the objective +phi_z
    scores = emb @ phi_z
    for i, S in enumerate(sets):
        if alpha[i] == 0:
            continue
        rows = _feasible_rows(m, S.vec.tobytes())
        vals = sign * np.sign(alpha[i]) * (scores if rows is None else scores[rows])
        k = int(np.argmin(vals))
        ys_new[i] = emb[k if rows is None else rows[k]]
    return ys_new


def il_predict_ranking(alpha, sets, max_iters=MAX_ITERS):
    """Infimum-loss prediction by alternating minimization."""
    return alternate_minimization(alpha, sets, "IL", max_iters).z


def sp_predict_ranking(alpha, sets, max_iters=MAX_ITERS):
    """Supremum-loss alternation; returns ``(z, stalled)``."""
    res = alternate_minimization(alpha, sets, "SP", max_iters)
    return res.z, res.stalled


def ac_center_ranking(S, n_samples=AC_SAMPLES, rng=None):
    """Estimate the mean embedding of ``S``.

    Solves the constrained feedback arc set for ``n_samples`` standard-normal
    objectives and averages the distinct embeddings found.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if S.n_fixed == n_pairs(S.m):
        return S.vec.astype(float)
    rng = np.random.default_rng() if rng is None else rng
    found = {}
    for c in rng.standard_normal((n_samples, n_pairs(S.m))):
        v = fas_solve(c, S, S.m).vertex
        found.setdefault(v.tobytes(), v)
    return np.mean(list(found.values()), axis=0)


def ac_predict_ranking(alpha, sets, n_samples=AC_SAMPLES, rng=None, centers=None):
    """Feedback arc set on ``-sum_i alpha_i c_i`` with ``c_i`` the estimated
    set centers.  Pass precomputed ``centers`` to reuse them across queries."""
    alpha, m = _check(alpha, sets)
    if centers is None:
        centers = ac_centers(sets, n_samples, rng)
    return fas_solve(-(alpha @ centers), m=m).perm


def ac_centers(sets, n_samples=AC_SAMPLES, rng=None):
    """Centers of every set, sampled once per distinct partial order."""
    rng = np.random.default_rng() if rng is None else rng
    cache = {}
    out = np.empty((len(sets), n_pairs(sets[0].m)))
    for i, S in enumerate(sets):
        if S.key not in cache:
            cache[S.key] = ac_center_ranking(S, n_samples, rng)
        out[i] = cache[S.key]
    return out


def exact_risks_ranking(alpha, sets, rule="IL"):
    """Weighted IL/AC/SP risk of every permutation, by enumeration.

    Rows follow the lexicographic order of :func:`infloss.fas.all_permutations`.
    """
    alpha, m = _check(alpha, sets)
    perms, emb = all_permutations(m)
    emb = emb.astype(float)
    m_e = n_pairs(m)
    reduce = {"IL": np.max, "AC": np.mean, "SP": np.min}[rule]
    R = np.zeros(perms.shape[0])
    for a, S in zip(alpha, sets):
        fixed = np.flatnonzero(S.vec)
        members = emb[np.all(emb[:, fixed] == S.vec[fixed], axis=1)]
        R += a * (m_e - reduce(emb @ members.T, axis=1))
    return R


def exact_predict_ranking(alpha, sets, rule="IL"):
    """Exact minimizer of :func:`exact_risks_ranking` (ties to the smallest rank vector)."""
    R = exact_risks_ranking(alpha, sets, rule)
    perms, _ = all_permutations(sets[0].m)
    k = int(np.flatnonzero(R <= R.min() + 1e-12 * (1.0 + abs(R.min())))[0])
    return perms[k].astype(int)
