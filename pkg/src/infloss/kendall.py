"""Kendall embedding of permutations and partial orders.

Conventions used across the package (all indices are 0-based):

* a permutation ``sigma`` is a rank vector, ``sigma[i]`` being the position
  of item ``i`` (position 0 is the top of the ordering);
* ``i ≻ j`` ("i before j") means ``sigma[i] < sigma[j]``;
* pairs ``(i, j)`` with ``i < j`` are enumerated lexicographically and the
  embedding is ``phi(sigma)[(i, j)] = sign(sigma[i] - sigma[j])``, so the
  identity permutation embeds to the all ``-1`` vector.

An ordering list (items from first to last) is the inverse permutation; use
:func:`ranks_from_ordering` / :func:`ordering_from_ranks` to convert.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "InconsistentOrderError",
    "PartialOrder",
    "n_pairs",
    "pair_indices",
    "pair_position",
    "items_from_pairs",
    "kendall_embed",
    "kendall_loss",
    "discordant_pairs",
    "symmetric_extension",
    "ranks_from_ordering",
    "ordering_from_ranks",
    "transitive_closure",
    "is_permutation",
]


class InconsistentOrderError(ValueError):
    """Pairwise preferences contain a cycle."""


def n_pairs(m):
    return m * (m - 1) // 2


@lru_cache(maxsize=None)
def pair_indices(m):
    """Arrays ``(I, J)`` listing the pairs ``i < j`` in lexicographic order."""
    I, J = np.triu_indices(m, k=1)
    I.setflags(write=False)
    J.setflags(write=False)
    return I, J


def pair_position(i, j, m):
    """Position of pair ``(i, j)``, ``i < j``, in the embedding vector."""
    if not 0 <= i < j < m:
        raise ValueError(f"need 0 <= i < j < m, got ({i}, {j}) with m={m}")
    return i * m - i * (i + 1) // 2 + (j - i - 1)


def items_from_pairs(m_e):
    """Recover ``m`` from an embedding length ``m(m-1)/2``."""
    m = int(round((1 + np.sqrt(1 + 8 * m_e)) / 2))
    if n_pairs(m) != m_e:
        raise ValueError(f"{m_e} is not a triangular number m(m-1)/2")
    return m


def is_permutation(sigma):
    sigma = np.asarray(sigma)
    return sigma.ndim == 1 and np.array_equal(np.sort(sigma), np.arange(sigma.size))


def _check_perm(sigma):
    sigma = np.asarray(sigma)
    if not is_permutation(sigma):
        raise ValueError(f"not a 0-based permutation: {sigma.tolist()}")
    return sigma


def kendall_embed(sigma):
    """±1 vector ``sign(sigma[i] - sigma[j])`` over pairs ``i < j``."""
    sigma = _check_perm(sigma)
    I, J = pair_indices(sigma.size)
    return np.sign(sigma[I] - sigma[J]).astype(np.int8)


def kendall_loss(y, z):
    """``m(m-1)/2 - phi(y) @ phi(z)``: twice the number of discordant pairs."""
    y = _check_perm(y)
    z = _check_perm(z)
    if y.size != z.size:
        raise ValueError("permutations of different sizes")
    return float(n_pairs(y.size) - kendall_embed(y).astype(int) @ kendall_embed(z).astype(int))


def discordant_pairs(y, z):
    """Direct pair count, independent of the embedding."""
    y = _check_perm(y)
    z = _check_perm(z)
    m = y.size
    return sum((y[i] < y[j]) != (z[i] < z[j]) for i in range(m) for j in range(i + 1, m))


def symmetric_extension(x, m=None):
    """Antisymmetric ``m x m`` matrix with ``X[i, j] = x_ij`` and ``X[j, i] = -x_ij``."""
    x = np.asarray(x, dtype=float)
    m = items_from_pairs(x.size) if m is None else m
    I, J = pair_indices(m)
    X = np.zeros((m, m))
    X[I, J] = x
    X[J, I] = -x
    return X


def ranks_from_ordering(order):
    """Inverse permutation: ordering list (first to last) to rank vector."""
    order = _check_perm(order)
    ranks = np.empty_like(order)
    ranks[order] = np.arange(order.size)
    return ranks


def ordering_from_ranks(sigma):
    return np.argsort(_check_perm(sigma), kind="stable")


@dataclass(frozen=True, eq=False)
class PartialOrder:
    """Transitively closed partial order stored as a Kendall vector.

    ``vec`` has entries in {-1, 0, +1}; 0 marks a pair left unspecified.
    Build instances with :func:`transitive_closure` or :meth:`from_pairs`.
    """

    m: int
    vec: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.vec, dtype=np.int8).copy()
        if vec.size != n_pairs(self.m):
            raise ValueError(f"vector of length {vec.size} for m={self.m}")
        if not np.all(np.isin(vec, (-1, 0, 1))):
            raise ValueError("partial order entries must be in {-1, 0, 1}")
        vec.setflags(write=False)
        object.__setattr__(self, "vec", vec)

    @classmethod
    def from_pairs(cls, m, pairs):
        """Closure of preferences given as ``(winner, loser)`` item pairs."""
        fixed = {}
        for a, b in pairs:
            if a == b:
                raise InconsistentOrderError(f"item {a} preferred to itself")
            key, s = ((a, b), -1) if a < b else ((b, a), 1)
            if fixed.get(key, s) != s:
                raise InconsistentOrderError(f"contradictory preferences on pair {key}")
            fixed[key] = s
        return transitive_closure(fixed, m)

    @classmethod
    def total(cls, sigma):
        sigma = np.asarray(sigma)
        return cls(sigma.size, kendall_embed(sigma))

    @classmethod
    def empty(cls, m):
        return cls(m, np.zeros(n_pairs(m), dtype=np.int8))

    @property
    def n_fixed(self):
        return int(np.count_nonzero(self.vec))

    @property
    def key(self):
        return (self.m, self.vec.tobytes())

    def contains(self, sigma):
        """True when the permutation agrees with every fixed pair."""
        phi = kendall_embed(sigma)
        mask = self.vec != 0
        return bool(np.all(phi[mask] == self.vec[mask]))

    def __eq__(self, other):
        return isinstance(other, PartialOrder) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        I, J = pair_indices(self.m)
        prefs = [f"{i}≻{j}" if s < 0 else f"{j}≻{i}"
                 for i, j, s in zip(I, J, self.vec) if s]
        return f"PartialOrder(m={self.m}, {{{', '.join(prefs)}}})"


def transitive_closure(fixed, m):
    """Close a sparse ``{(i, j): ±1}`` map of Kendall coordinates.

    Keys may be given in either order; a key ``(j, i)`` with ``j > i`` is read
    as the coordinate ``(i, j)`` with the opposite sign.  Pairs not implied by
    transitivity stay 0.

    Raises
    ------
    InconsistentOrderError
        If the preferences contain a cycle.
    """
    before = np.zeros((m, m), dtype=bool)   # before[a, b]: a ≻ b
    items = fixed.items() if isinstance(fixed, dict) else fixed
    for (i, j), s in items:
        if s == 0:
            continue
        if not (0 <= i < m and 0 <= j < m) or i == j:
            raise ValueError(f"bad pair ({i}, {j}) for m={m}")
        if i > j:
            i, j, s = j, i, -s
        if s < 0:
            before[i, j] = True
        else:
            before[j, i] = True
    for k in range(m):
        before |= before[:, [k]] & before[[k], :]
    if np.any(np.diag(before)):
        cyc = np.flatnonzero(np.diag(before)).tolist()
        raise InconsistentOrderError(f"preference cycle through items {cyc}")
    I, J = pair_indices(m)
    vec = np.where(before[I, J], -1, np.where(before[J, I], 1, 0)).astype(np.int8)
    return PartialOrder(m, vec)
