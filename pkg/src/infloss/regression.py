"""Partial regression on the real line with the squared loss.

Candidate sets are finite unions of closed intervals, possibly with a
half-infinite first or last piece (censoring).  The infimum loss of ``z``
against a set is its squared distance to the nearest point of the set; the
weighted empirical objective

    F(z) = sum_i alpha_i * d_i(z)

is piecewise quadratic, with ``d_i`` the nearest-point distance when
``alpha_i >= 0`` and the farthest-point distance otherwise (the infimum of a
negative multiple of a squared distance is reached at the farthest point).
:func:`il_predict_reg` minimizes it exactly region by region.
"""

from dataclasses import dataclass

import numpy as np

from .kernel import fit_ridge

__all__ = [
    "IntervalUnion",
    "PiecewiseQuadratic",
    "piecewise_objective",
    "UnboundedSetError",
    "nearest_sq_dist",
    "farthest_sq_dist",
    "objective",
    "il_predict_reg",
    "ac_center",
    "ac_predict_reg",
    "sp_predict_reg",
    "phase_loss_sets",
    "PartialRegressor",
]

_TIE = 1e-12


class UnboundedSetError(ValueError):
    """Operation needs a bounded candidate set."""


@dataclass(frozen=True, eq=False)
class IntervalUnion:
    """Sorted, disjoint, non-touching closed intervals ``[lo[k], hi[k]]``."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float)).copy()
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float)).copy()
        if lo.size == 0 or lo.shape != hi.shape:
            raise ValueError("need matching, non-empty endpoint arrays")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise ValueError("every interval needs lo <= hi")
        if np.any(hi[:-1] >= lo[1:]):
            raise ValueError("intervals must be sorted and separated by gaps")
        if np.any(np.isinf(lo[1:])) or np.any(np.isinf(hi[:-1])) \
                or lo[0] == np.inf or hi[-1] == -np.inf:
            raise ValueError("only the outermost endpoints may be infinite")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def from_intervals(cls, intervals):
        """Sort and merge overlapping or touching ``(lo, hi)`` pairs."""
        pieces = sorted((float(a), float(b)) for a, b in intervals)
        if not pieces:
            raise ValueError("empty set")
        merged = [list(pieces[0])]
        for a, b in pieces[1:]:
            if a > b:
                raise ValueError(f"interval ({a}, {b}) has lo > hi")
            if a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        arr = np.array(merged)
        return cls(arr[:, 0], arr[:, 1])

    @classmethod
    def point(cls, y):
        return cls([y], [y])

    @property
    def bounded(self):
        return bool(np.isfinite(self.lo[0]) and np.isfinite(self.hi[-1]))

    @property
    def hull(self):
        return float(self.lo[0]), float(self.hi[-1])

    def contains(self, y):
        return bool(np.any((self.lo <= y) & (y <= self.hi)))

    def __repr__(self):
        parts = " ∪ ".join(f"[{a:g}, {b:g}]" for a, b in zip(self.lo, self.hi))
        return f"IntervalUnion({parts})"


def nearest_sq_dist(z, S):
    """Squared distance from ``z`` (scalar or array) to the set ``S``."""
    z = np.asarray(z, dtype=float)
    gap = np.maximum(np.maximum(S.lo - z[..., None], z[..., None] - S.hi), 0.0)
    out = gap.min(axis=-1) ** 2
    return float(out) if out.ndim == 0 else out


def farthest_sq_dist(z, S):
    """Squared distance from ``z`` to the farthest point of a bounded set."""
    if not S.bounded:
        raise UnboundedSetError("farthest distance of an unbounded set is infinite")
    z = np.asarray(z, dtype=float)
    a, b = S.hull
    out = np.maximum((z - a) ** 2, (b - z) ** 2)
    return float(out) if out.ndim == 0 else out


def _check(alpha, sets):
    alpha = np.asarray(alpha, dtype=float).ravel()
    if len(sets) == 0:
        raise ValueError("need at least one candidate set")
    if alpha.size != len(sets):
        raise ValueError(f"{alpha.size} weights for {len(sets)} sets")
    return alpha


class _Pieces:
    """Flattened view of weighted sets for vectorized evaluation."""

    def __init__(self, weights, sets, farthest):
        self.w = weights
        self.far = np.asarray(farthest, dtype=bool)
        near_idx = np.flatnonzero(~self.far)
        far_idx = np.flatnonzero(self.far)
        self.near_idx = near_idx
        self.far_idx = far_idx
        if near_idx.size:
            counts = np.array([sets[i].lo.size for i in near_idx])
            self.flo = np.concatenate([sets[i].lo for i in near_idx])
            self.fhi = np.concatenate([sets[i].hi for i in near_idx])
            self.starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        if far_idx.size:
            hulls = np.array([sets[i].hull for i in far_idx])
            if not np.all(np.isfinite(hulls)):
                raise UnboundedSetError("sets with farthest-point loss must be bounded")
            self.hlo, self.hhi = hulls[:, 0], hulls[:, 1]

    def breakpoints(self):
        pts = []
        if self.near_idx.size:
            pts += [self.flo, self.fhi]
            # gap midpoints, skipped across set boundaries
            inner = np.ones(self.flo.size, dtype=bool)
            inner[self.starts] = False
            k = np.flatnonzero(inner)
            pts.append(0.5 * (self.fhi[k - 1] + self.flo[k]))
        if self.far_idx.size:
            pts += [self.hlo, self.hhi, 0.5 * (self.hlo + self.hhi)]
        pts = np.concatenate(pts) if pts else np.zeros(1)
        pts = np.unique(pts[np.isfinite(pts)])
        return pts if pts.size else np.zeros(1)

    def nearest_points(self, T):
        """Active anchor point of every sample at each ``T``; NaN when the
        sample contributes 0 (``T`` inside the set)."""
        P = np.full((T.size, self.w.size), np.nan)
        if self.near_idx.size:
            clip = np.clip(T[:, None], self.flo[None, :], self.fhi[None, :])
            off = clip - T[:, None]
            a = np.abs(off)
            mins = np.minimum.reduceat(a, self.starts, axis=1)
            owner = np.repeat(np.arange(self.near_idx.size), np.diff(
                np.concatenate([self.starts, [self.flo.size]])))
            eq = a <= mins[:, owner]
            # equidistant neighbours (gap midpoints): either one gives the same value
            s = np.minimum.reduceat(np.where(eq, off, np.inf), self.starts, axis=1)
            p = T[:, None] + s
            P[:, self.near_idx] = np.where(mins > 0, p, np.nan)
        if self.far_idx.size:
            mid = 0.5 * (self.hlo + self.hhi)
            P[:, self.far_idx] = np.where(T[:, None] >= mid[None, :], self.hlo, self.hhi)
        return P

    def value(self, Z):
        Z = np.asarray(Z, dtype=float)
        P = self.nearest_points(Z)
        D = np.where(np.isnan(P), 0.0, (Z[:, None] - np.nan_to_num(P)) ** 2)
        return D @ self.w

    def quadratic(self):
        B = self.breakpoints()
        reps = np.concatenate([[B[0] - 1.0], 0.5 * (B[:-1] + B[1:]), [B[-1] + 1.0]])
        P = self.nearest_points(reps)
        on = ~np.isnan(P)
        Pz = np.nan_to_num(P)
        a = on @ self.w
        b = (on * (-2.0 * Pz)) @ self.w
        c0 = (on * Pz ** 2) @ self.w
        return PiecewiseQuadratic(B, a, b, c0)


@dataclass(frozen=True, eq=False)
class PiecewiseQuadratic:
    """``a[k] z^2 + b[k] z + c0[k]`` on region ``k``.

    Region 0 is ``(-inf, breaks[0]]``, region ``k`` is
    ``[breaks[k-1], breaks[k]]`` and the last one ends at ``+inf``.
    """

    breaks: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c0: np.ndarray

    def region(self, z):
        return np.searchsorted(self.breaks, z, side="left")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        k = self.region(z)
        out = (self.a[k] * z + self.b[k]) * z + self.c0[k]
        return float(out) if out.ndim == 0 else out

    def jumps(self):
        """Gap between the left and right pieces at every breakpoint."""
        B = self.breaks
        left = (self.a[:-1] * B + self.b[:-1]) * B + self.c0[:-1]
        right = (self.a[1:] * B + self.b[1:]) * B + self.c0[1:]
        return np.abs(left - right)

    def candidates(self):
        """Breakpoints plus interior vertices of convex pieces."""
        lows = np.concatenate([[-np.inf], self.breaks])
        highs = np.concatenate([self.breaks, [np.inf]])
        with np.errstate(divide="ignore", invalid="ignore"):
            v = -self.b / (2.0 * self.a)
        ok = (self.a > 0) & (lows < v) & (v < highs)
        return np.unique(np.concatenate([self.breaks, v[ok]]))


def _minimize(pieces):
    Z = pieces.quadratic().candidates()
    vals = pieces.value(Z)
    best = vals.min()
    return float(Z[np.flatnonzero(vals <= best + _TIE * (1.0 + abs(best)))[0]]), float(best)


def piecewise_objective(alpha, sets, rule="IL"):
    """:class:`PiecewiseQuadratic` form of the weighted objective."""
    alpha = _check(alpha, sets)
    far = alpha < 0 if rule == "IL" else np.ones(alpha.size, dtype=bool)
    return _Pieces(alpha, sets, far).quadratic()


def objective(z, alpha, sets, rule="IL"):
    """Evaluate the weighted empirical objective minimized by the predictors."""
    alpha = _check(alpha, sets)
    far = alpha < 0 if rule == "IL" else np.ones(alpha.size, dtype=bool)
    return _Pieces(alpha, sets, far).value(np.atleast_1d(z))


def il_predict_reg(alpha, sets):
    """Exact global minimizer of ``F``; flat minima resolve to the smallest ``z``.

    When the weights sum to a non-positive value ``F`` is unbounded below
    outside the sets, and the search is restricted to the hull of the
    finite breakpoints.
    """
    alpha = _check(alpha, sets)
    neg = alpha < 0
    if any(not sets[i].bounded for i in np.flatnonzero(neg)):
        raise UnboundedSetError("a set with negative weight must be bounded")
    z, _ = _minimize(_Pieces(alpha, sets, neg))
    return z


def ac_center(S):
    """Length-weighted mean of interval midpoints (plain mean for point sets)."""
    if not S.bounded:
        raise UnboundedSetError("the center of an unbounded set is undefined")
    length = S.hi - S.lo
    mids = 0.5 * (S.lo + S.hi)
    if length.sum() > 0:
        return float(length @ mids / length.sum())
    return float(mids.mean())


def ac_predict_reg(alpha, sets):
    """Weighted mean of the set centers."""
    alpha = _check(alpha, sets)
    total = alpha.sum()
    if abs(total) <= 1e-12:
        raise ValueError("weights sum to zero; the average-candidate objective is flat")
    return float(alpha @ np.array([ac_center(S) for S in sets]) / total)


def sp_predict_reg(alpha, sets):
    """Minimizer of ``sum_i alpha_i * farthest_sq_dist(z, S_i)`` (convex for
    non-negative weights, the only supported regime)."""
    alpha = _check(alpha, sets)
    if np.any(alpha < 0):
        raise ValueError("supremum-loss regression requires non-negative weights")
    if not all(S.bounded for S in sets):
        raise UnboundedSetError("supremum loss needs bounded sets")
    z, _ = _minimize(_Pieces(alpha, sets, np.ones(alpha.size, dtype=bool)))
    return z


def phase_loss_sets(y, p_phase, width_lo=1.0, width_hi=1.0, rng=None):
    """Candidate set for ``y`` from an amplitude interval with a random phase.

    The amplitude interval is ``[|y| - width_lo*u1, |y| + width_hi*u2]`` with
    ``u1, u2 ~ U(0, 1)`` and its lower end clamped at 0.  With probability
    ``p_phase`` the sign is kept; otherwise the set is symmetric around 0.
    """
    if not 0 <= p_phase <= 1:
        raise ValueError("p_phase must lie in [0, 1]")
    if not (width_lo > 0 and width_hi > 0):
        raise ValueError("widths must be positive")
    rng = np.random.default_rng() if rng is None else rng
    amp = abs(float(y))
    u1, u2, coin = rng.random(3)
    a = max(amp - width_lo * u1, 0.0)
    b = amp + width_hi * u2
    if y == 0:
        return IntervalUnion([-b], [b])
    if coin < p_phase:
        return IntervalUnion([a], [b]) if y > 0 else IntervalUnion([-b], [-a])
    if a == 0:
        return IntervalUnion([-b], [b])
    return IntervalUnion([-b, a], [-a, b])


class PartialRegressor:
    """Kernel ridge partial regression with IL, AC and (non-negative weight) SP inference."""

    def __init__(self, sigma, lam, kernel=None):
        self.sigma = sigma
        self.lam = lam
        self.kernel = kernel

    def fit(self, X, sets):
        self.sets_ = list(sets)
        self.model_ = fit_ridge(X, self.sigma, self.lam, self.kernel)
        return self

    def alphas(self, Xq):
        V = self.model_.kernel_vector(Xq)
        return self.model_.solve(V.T).T

    def predict(self, Xq, rule="IL"):
        A = self.alphas(Xq)
        if rule == "IL":
            return np.array([il_predict_reg(a, self.sets_) for a in A])
        if rule == "AC":
            centers = np.array([ac_center(S) for S in self.sets_])
            return (A @ centers) / A.sum(axis=1)
        if rule == "SP":
            return np.array([sp_predict_reg(a, self.sets_) for a in A])
        raise ValueError(f"unknown rule {rule!r}")
