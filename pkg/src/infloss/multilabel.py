"""Multilabel prediction with the Hamming loss.

Tag vectors live in ``{-1, +1}^m``.  Two forms of weak supervision are
supported:

* tag constraints ``(P, N)``: tags in ``P`` are known relevant, tags in
  ``N`` known irrelevant, the rest unobserved.  Inference decouples over
  tags and reduces to thresholding or top-k on per-tag scores.
* Hamming balls ``B(center, r)``.  The infimum and supremum losses have
  closed forms in ``h = hamming(z, center)``; inference is an exhaustive
  search over ``{-1, +1}^m`` in lexicographic order (``-1 < +1``).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "TagConstraint",
    "HammingBall",
    "IL_SP_MAX_TAGS",
    "AC_MAX_TAGS",
    "hamming",
    "pn_table",
    "tag_scores",
    "pn_loss",
    "sign_predict",
    "topk_predict",
    "ball_infimum_loss",
    "ball_supremum_loss",
    "ball_average_loss",
    "ball_members",
    "candidates",
    "ball_loss_table",
    "ball_predict",
]

IL_SP_MAX_TAGS = 20
AC_MAX_TAGS = 12


def _tags(y):
    y = np.asarray(y)
    if y.ndim != 1 or not np.all((y == 1) | (y == -1)):
        raise ValueError("tag vectors must be 1-d with entries in {-1, +1}")
    return y.astype(np.int8)


def hamming(y, z):
    y, z = _tags(y), _tags(z)
    if y.size != z.size:
        raise ValueError(f"tag vectors of lengths {y.size} and {z.size}")
    return int(np.count_nonzero(y != z))


@dataclass(frozen=True)
class TagConstraint:
    """Known relevant tags ``P`` and known irrelevant tags ``N``."""

    P: frozenset = frozenset()
    N: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "P", frozenset(int(j) for j in self.P))
        object.__setattr__(self, "N", frozenset(int(j) for j in self.N))
        if self.P & self.N:
            raise ValueError(f"tags {sorted(self.P & self.N)} are both relevant and irrelevant")

    def contains(self, y):
        y = _tags(y)
        return all(y[j] == 1 for j in self.P) and all(y[j] == -1 for j in self.N)


@dataclass(frozen=True)
class HammingBall:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError(f"radius must be non-negative, got {self.radius}")
        object.__setattr__(self, "center", _tags(self.center))

    @property
    def m(self):
        return self.center.size

    @property
    def int_radius(self):
        """Hamming distances are integers, so ``B(c, r) = B(c, floor(r))``."""
        return int(math.floor(self.radius))

    def contains(self, y):
        return hamming(y, self.center) <= self.radius


def pn_table(constraints, m):
    """``(n, m)`` matrix with +1 on relevant tags, -1 on irrelevant ones."""
    T = np.zeros((len(constraints), m))
    for i, c in enumerate(constraints):
        if any(j >= m or j < 0 for j in c.P | c.N):
            raise ValueError(f"constraint {i} mentions a tag outside range({m})")
        T[i, list(c.P)] = 1.0
        T[i, list(c.N)] = -1.0
    return T


def tag_scores(alpha, constraints, m):
    """``sum_{i: j in P_i} alpha_i - sum_{i: j in N_i} alpha_i`` for each tag ``j``."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (len(constraints),):
        raise ValueError(f"{alpha.size} weights for {len(constraints)} constraints")
    return alpha @ pn_table(constraints, m)


def pn_loss(z, constraint, rule="IL"):
    """Loss of ``z`` against a tag constraint.

    Observed tags cost 1 when violated.  Each unobserved tag adds 0 (IL),
    1/2 (AC) or 1 (SP).
    """
    z = _tags(z)
    paid = sum(z[j] == -1 for j in constraint.P) + sum(z[j] == 1 for j in constraint.N)
    unseen = z.size - len(constraint.P) - len(constraint.N)
    extra = {"IL": 0.0, "AC": 0.5, "SP": 1.0}
    if rule not in extra:
        raise ValueError(f"unknown rule {rule!r}")
    return float(paid) + extra[rule] * unseen


def sign_predict(scores, epsilon=0.0):
    """``+1`` where the score exceeds ``epsilon`` strictly, ``-1`` elsewhere."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    scores = np.asarray(scores, dtype=float)
    return np.where(scores > epsilon, 1, -1).astype(np.int8)


def topk_predict(scores, k):
    """``+1`` on the ``k`` largest scores, ties favouring the smaller index."""
    scores = np.asarray(scores, dtype=float)
    m = scores.size
    if not 0 <= k <= m:
        raise ValueError(f"k must lie in [0, {m}], got {k}")
    out = -np.ones(m, dtype=np.int8)
    out[np.argsort(-scores, kind="stable")[:k]] = 1
    return out


def ball_infimum_loss(z, ball):
    return max(0, hamming(z, ball.center) - ball.int_radius)


def ball_supremum_loss(z, ball):
    return min(ball.m, hamming(z, ball.center) + ball.int_radius)


def candidates(m):
    """All of ``{-1, +1}^m`` in lexicographic order with ``-1 < +1``."""
    if m > IL_SP_MAX_TAGS:
        raise ValueError(f"exhaustive search capped at m={IL_SP_MAX_TAGS}, got {m}")
    return _candidates(m)


@lru_cache(maxsize=None)
def _candidates(m):
    if m == 0:
        return np.zeros((1, 0), dtype=np.int8)
    bits = (np.arange(2 ** m)[:, None] >> np.arange(m - 1, -1, -1)) & 1
    out = (2 * bits - 1).astype(np.int8)
    out.setflags(write=False)
    return out


def ball_members(ball):
    """Enumerate the members of a ball (``m <= AC_MAX_TAGS``)."""
    if ball.m > AC_MAX_TAGS:
        raise ValueError(f"ball enumeration capped at m={AC_MAX_TAGS}, got {ball.m}")
    C = _candidates(ball.m)
    return C[np.count_nonzero(C != ball.center, axis=1) <= ball.radius]


def ball_average_loss(z, ball):
    """Mean Hamming distance from ``z`` to the members of ``ball``."""
    z = _tags(z)
    Y = ball_members(ball)
    return float(np.count_nonzero(Y != z, axis=1).mean())


@lru_cache(maxsize=None)
def _average_by_distance(m, R):
    """``table[h]``: mean distance from a point ``h`` away from the center to
    the ball of integer radius ``R``, by enumeration around center ``-1``."""
    C = _candidates(m)
    members = C[np.count_nonzero(C == 1, axis=1) <= R]
    table = np.empty(m + 1)
    for h in range(m + 1):
        z = -np.ones(m, dtype=np.int8)
        z[:h] = 1
        table[h] = np.count_nonzero(members != z, axis=1).mean()
    table.setflags(write=False)
    return table


_RULE_CAPS = {"IL": IL_SP_MAX_TAGS, "SP": IL_SP_MAX_TAGS, "AC": AC_MAX_TAGS}


def _ball_losses(H, radii, m, rule):
    """Losses for distances ``H`` of shape ``(candidates, balls)``."""
    if rule == "IL":
        return np.maximum(H - radii[None, :], 0).astype(float)
    if rule == "SP":
        return np.minimum(H + radii[None, :], m).astype(float)
    out = np.empty(H.shape)
    for R in np.unique(radii):
        cols = radii == R
        out[:, cols] = _average_by_distance(m, int(R))[H[:, cols]]
    return out


def _check_balls(balls, rule):
    if not balls:
        raise ValueError("need at least one ball")
    if rule not in _RULE_CAPS:
        raise ValueError(f"unknown rule {rule!r}")
    m = balls[0].m
    if any(b.m != m for b in balls):
        raise ValueError("balls over different tag counts")
    if m > _RULE_CAPS[rule]:
        raise ValueError(f"{rule} inference capped at m={_RULE_CAPS[rule]}, got {m}")
    centers = np.array([b.center for b in balls])
    radii = np.array([b.int_radius for b in balls])
    return m, centers, radii


def ball_loss_table(balls, rule="IL"):
    """``(n, 2^m)`` table of ``loss(candidate, ball_i)``; columns follow
    :func:`candidates` order."""
    m, centers, radii = _check_balls(balls, rule)
    C = candidates(m)
    H = np.count_nonzero(C[:, None, :] != centers[None, :, :], axis=2)
    return _ball_losses(H, radii, m, rule).T


def ball_predict(alpha, balls, rule="IL", block=1 << 14):
    """Exhaustive argmin over ``{-1, +1}^m`` of ``sum_i alpha_i loss(z, ball_i)``."""
    m, centers, radii = _check_balls(balls, rule)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (len(balls),):
        raise ValueError(f"{alpha.size} weights for {len(balls)} balls")
    C = candidates(m)
    best_val, best_idx = np.inf, -1
    for start in range(0, C.shape[0], block):
        Cb = C[start:start + block]
        H = np.count_nonzero(Cb[:, None, :] != centers[None, :, :], axis=2)
        vals = _ball_losses(H, radii, m, rule) @ alpha
        low = vals.min()
        k = int(np.flatnonzero(vals <= low + 1e-12 * (1.0 + abs(low)))[0])
        if best_idx < 0 or vals[k] < best_val - 1e-12 * (1.0 + abs(best_val)):
            best_val, best_idx = vals[k], start + k
    return C[best_idx].copy()
