"""Constrained minimum feedback arc set over Kendall embeddings.

All solvers minimize ``<c, phi(sigma)>`` over the permutations ``sigma``
compatible with an optional :class:`~infloss.kendall.PartialOrder`.  Exact
enumeration is used up to ``BRUTEFORCE_MAX_M`` items and the linear relaxation
over the canonical polytope (transitivity rows intersected with the
``[-1, 1]`` box) beyond, followed by row-sum rounding.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .kendall import (PartialOrder, items_from_pairs, kendall_embed, n_pairs,
                      pair_position, symmetric_extension)
from .simplex import LinearProgram, lp_solve

__all__ = [
    "FasSolution",
    "InfeasibleConstraintError",
    "BRUTEFORCE_MAX_M",
    "EXACT_DISPATCH_MAX_M",
    "INTEGRALITY_TOL",
    "all_permutations",
    "fas_bruteforce",
    "transitivity_polytope",
    "canonical_lp",
    "fas_lp",
    "fas_round",
    "fas_solve",
    "fas_sort_heuristic",
]

BRUTEFORCE_MAX_M = 9
EXACT_DISPATCH_MAX_M = 7
INTEGRALITY_TOL = 1e-7


class InfeasibleConstraintError(ValueError):
    """No permutation satisfies the fixed coordinates."""


@dataclass
class FasSolution:
    """A permutation together with its objective ``<c, phi(perm)>``.

    ``integral`` is meaningful on the LP path only (it is always True for the
    exact solvers); ``vertex`` holds the LP basic solution and ``lp_value``
    its objective, which lower-bounds ``value``.
    """

    perm: np.ndarray
    value: float
    integral: bool = True
    vertex: np.ndarray = None
    lp_value: float = None


@lru_cache(maxsize=None)
def all_permutations(m):
    """Rank vectors of every permutation of ``m`` items in lexicographic
    order, and the matching ``(m!, m_e)`` embedding matrix."""
    if m > BRUTEFORCE_MAX_M:
        raise ValueError(f"enumeration capped at m={BRUTEFORCE_MAX_M}, got {m}")
    perms = np.array(list(permutations(range(m))), dtype=np.int8).reshape(-1, m)
    if m < 2:
        emb = np.zeros((perms.shape[0], 0), dtype=np.int8)
    else:
        I, J = np.triu_indices(m, k=1)
        emb = np.sign(perms[:, I].astype(np.int16) - perms[:, J]).astype(np.int8)
    perms.setflags(write=False)
    emb.setflags(write=False)
    return perms, emb


@lru_cache(maxsize=4096)
def _feasible_rows(m, key):
    _, emb = all_permutations(m)
    vec = np.frombuffer(key, dtype=np.int8)
    fixed = np.flatnonzero(vec)
    if fixed.size == 0:
        return None
    return np.flatnonzero(np.all(emb[:, fixed] == vec[fixed], axis=1))


def _objective(c, m=None):
    c = np.asarray(c, dtype=float).ravel()
    if m is None:
        m = items_from_pairs(c.size)
    elif c.size != n_pairs(m):
        raise ValueError(f"objective of length {c.size} for m={m}")
    if not np.all(np.isfinite(c)):
        raise ValueError("objective must be finite")
    return c, m


def _check_constraint(constraint, m):
    if constraint is not None and constraint.m != m:
        raise ValueError(f"constraint over {constraint.m} items, objective over {m}")


def fas_bruteforce(c, constraint=None, m=None):
    """Exact minimizer by enumeration; ties go to the lexicographically
    smallest rank vector."""
    c, m = _objective(c, m)
    _check_constraint(constraint, m)
    perms, emb = all_permutations(m)
    rows = None if constraint is None else _feasible_rows(m, constraint.vec.tobytes())
    if rows is not None and rows.size == 0:
        raise InfeasibleConstraintError("no permutation satisfies the constraint")
    values = emb @ c if rows is None else emb[rows] @ c
    best = values.min()
    k = int(np.flatnonzero(values <= best + 1e-12 * (1.0 + abs(best)))[0])
    idx = k if rows is None else int(rows[k])
    perm = perms[idx].astype(int)
    phi = emb[idx].astype(float)
    return FasSolution(perm, float(phi @ c), True, phi, None)


@lru_cache(maxsize=None)
def transitivity_polytope(m):
    """Rows ``-1 <= x_ij + x_jk - x_ik <= 1`` for every triple ``i < j < k``.

    Returns the ``(C(m, 3), m_e)`` coefficient matrix; together with the box
    ``[-1, 1]^{m_e}`` it describes the canonical polytope.
    """
    if m < 2:
        raise ValueError("need at least two items")
    rows = []
    for i, j, k in combinations(range(m), 3):
        r = np.zeros(n_pairs(m))
        r[pair_position(i, j, m)] = 1.0
        r[pair_position(j, k, m)] = 1.0
        r[pair_position(i, k, m)] = -1.0
        rows.append(r)
    T = np.array(rows).reshape(-1, n_pairs(m))
    T.setflags(write=False)
    return T


def canonical_lp(c, constraint=None, m=None):
    """LP over the canonical polytope; fixed coordinates become equal bounds."""
    c, m = _objective(c, m)
    _check_constraint(constraint, m)
    T = transitivity_polytope(m)
    A = np.vstack([T, T])
    b = np.ones(2 * T.shape[0])
    senses = ["<="] * T.shape[0] + [">="] * T.shape[0]
    b[T.shape[0]:] = -1.0
    lower = -np.ones(c.size)
    upper = np.ones(c.size)
    if constraint is not None:
        mask = constraint.vec != 0
        lower[mask] = constraint.vec[mask]
        upper[mask] = constraint.vec[mask]
    return LinearProgram(c, A, b, senses, lower, upper)


def fas_round(x, m=None):
    """Order items by ascending row sums of the symmetric extension of ``x``.

    Ties keep the smaller item first.  On an integral vertex this recovers
    the permutation whose embedding is ``x``.
    """
    x = np.asarray(x, dtype=float)
    m = items_from_pairs(x.size) if m is None else m
    sums = symmetric_extension(x, m).sum(axis=1)
    # snap round-off so exact ties stay ties
    sums = np.round(sums, 9)
    order = np.argsort(sums, kind="stable")
    perm = np.empty(m, dtype=int)
    perm[order] = np.arange(m)
    return perm


def fas_lp(c, constraint=None, m=None, iteration_cap=20000):
    """Solve the linear relaxation with the simplex and round the vertex.

    Raises
    ------
    InfeasibleConstraintError
        When the fixed coordinates are inconsistent.
    """
    c, m = _objective(c, m)
    lp = canonical_lp(c, constraint, m)
    sol = lp_solve(lp, iteration_cap=iteration_cap)
    if sol.status == "infeasible":
        raise InfeasibleConstraintError("canonical polytope is empty under the constraint")
    if sol.status == "unbounded":
        raise AssertionError("box-bounded LP reported unbounded")
    if sol.status != "optimal":
        raise RuntimeError(f"simplex stopped with status {sol.status!r}")
    x = sol.x
    integral = bool(np.all(np.abs(np.abs(x) - 1.0) <= INTEGRALITY_TOL))
    if integral:
        x = np.sign(x)
    perm = fas_round(x, m)
    phi = kendall_embed(perm).astype(float)
    return FasSolution(perm, float(phi @ c), integral, x, sol.value)


def fas_solve(c, constraint=None, m=None):
    """Exact enumeration for ``m <= 7``, LP relaxation plus rounding beyond."""
    c, m = _objective(c, m)
    if m <= EXACT_DISPATCH_MAX_M:
        return fas_bruteforce(c, constraint, m)
    return fas_lp(c, constraint, m)


def fas_sort_heuristic(c, m=None):
    """Quicksort items with a pairwise comparator (middle-element pivot).

    Item ``i`` goes before ``j`` when ``C[i, j] > 0`` for the antisymmetric
    extension ``C`` of ``c``: placing ``i`` first sets ``phi_ij = -1`` and
    lowers the objective by ``C[i, j]``.  Zero entries fall back to item index.
    """
    c, m = _objective(c, m)
    C = symmetric_extension(c, m)

    def before(i, j):
        return C[i, j] > 0 or (C[i, j] == 0 and i < j)

    def qsort(items):
        if len(items) <= 1:
            return items
        p = items[len(items) // 2]
        left = [i for i in items if i != p and before(i, p)]
        right = [i for i in items if i != p and not before(i, p)]
        return qsort(left) + [p] + qsort(right)

    order = qsort(list(range(m)))
    perm = np.empty(m, dtype=int)
    perm[order] = np.arange(m)
    return perm
