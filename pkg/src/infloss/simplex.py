"""Dense two-phase primal simplex for small linear programs.

Variables carry individual lower/upper bounds (possibly infinite) and are
handled directly by a bounded-variable ratio test, so box constraints never
become tableau rows.  Pivoting follows Bland's rule throughout: the entering
column is the smallest eligible index and ratio ties leave by the smallest
basic index.  The result is slow on large problems but deterministic and
cycle free, and an optimal answer is always a basic (vertex) solution.

Example
-------
>>> lp = LinearProgram(c=[-1.0, -1.0], A=[[1.0, 1.0]], b=[1.0], senses=["<="])
>>> sol = lp_solve(lp)
>>> sol.status, round(sol.value, 12)
('optimal', -1.0)
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["LinearProgram", "SimplexSolution", "lp_solve", "SENSES"]

SENSES = ("<=", "=", ">=")

_PIVOT_TOL = 1e-9
_COST_TOL = 1e-9
_FEAS_TOL = 1e-8


@dataclass(frozen=True)
class LinearProgram:
    """``minimize c @ x`` subject to ``A x (senses) b`` and ``lower <= x <= upper``.

    ``lower`` defaults to 0 and ``upper`` to +inf.  Rows may be empty.
    """

    c: np.ndarray
    A: np.ndarray = None
    b: np.ndarray = None
    senses: tuple = None
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        n = c.size
        if n == 0:
            raise ValueError("LP needs at least one variable")
        A = np.zeros((0, n)) if self.A is None else np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[1] != n:
            raise ValueError(f"constraint matrix must have shape (k, {n}), got {A.shape}")
        k = A.shape[0]
        b = np.zeros(0) if self.b is None else np.asarray(self.b, dtype=float).ravel()
        if b.size != k:
            raise ValueError(f"rhs has {b.size} entries for {k} rows")
        senses = ("<=",) * k if self.senses is None else tuple(self.senses)
        if len(senses) != k:
            raise ValueError(f"{len(senses)} senses for {k} rows")
        bad = [s for s in senses if s not in SENSES]
        if bad:
            raise ValueError(f"unknown row sense(s) {bad}; expected one of {SENSES}")
        lower = np.zeros(n) if self.lower is None else np.broadcast_to(
            np.asarray(self.lower, dtype=float), (n,)).copy()
        upper = np.full(n, np.inf) if self.upper is None else np.broadcast_to(
            np.asarray(self.upper, dtype=float), (n,)).copy()
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("objective and constraint data must be finite")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)):
            raise ValueError("bounds must not be NaN")
        if np.any(lower == np.inf) or np.any(upper == -np.inf):
            raise ValueError("lower bound +inf or upper bound -inf is infeasible by construction")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "senses", senses)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n_vars(self):
        return self.c.size

    @property
    def n_rows(self):
        return self.A.shape[0]

    def residual(self, x):
        """Largest violation of rows and bounds at ``x`` (0 when feasible)."""
        x = np.asarray(x, dtype=float)
        viol = [0.0]
        if self.n_rows:
            r = self.A @ x - self.b
            for sense, ri in zip(self.senses, r):
                if sense == "<=":
                    viol.append(max(ri, 0.0))
                elif sense == ">=":
                    viol.append(max(-ri, 0.0))
                else:
                    viol.append(abs(ri))
        viol.append(float(np.max(np.maximum(self.lower - x, 0.0))))
        viol.append(float(np.max(np.maximum(x - self.upper, 0.0))))
        return max(viol)


@dataclass
class SimplexSolution:
    """Outcome of :func:`lp_solve`.

    ``basis`` lists the basic columns of the internal standard form (shifted
    structural columns first, then one slack per inequality row) and
    ``at_upper`` the nonbasic columns resting at their upper bound.
    """

    status: str
    x: np.ndarray
    value: float
    basis: tuple = ()
    at_upper: tuple = ()
    iterations: int = 0
    phase1_iterations: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def optimal(self):
        return self.status == "optimal"


class _Tableau:
    """Bounded-variable simplex tableau over ``A x = b, 0 <= x <= u``."""

    def __init__(self, A, b, u, basis):
        self.T = A.copy()
        self.beta = b.copy()
        self.u = u.copy()
        self.basis = list(basis)
        self.is_basic = np.zeros(A.shape[1], dtype=bool)
        self.is_basic[self.basis] = True
        self.at_upper = np.zeros(A.shape[1], dtype=bool)
        self.iterations = 0

    def nonbasic_values(self):
        return np.where(self.at_upper, self.u, 0.0)

    def point(self):
        x = self.nonbasic_values()
        x[self.is_basic] = 0.0
        x[self.basis] = self.beta
        return x

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[np.abs(T) < 1e-14] = 0.0
        leaving = self.basis[r]
        self.is_basic[leaving] = False
        self.is_basic[j] = True
        self.basis[r] = j

    def run(self, cost, cap):
        """Minimize ``cost @ x``; returns 'optimal', 'unbounded' or 'iteration_limit'."""
        u = self.u
        while True:
            if self.iterations >= cap:
                return "iteration_limit"
            cB = cost[self.basis]
            d = cost - cB @ self.T
            movable = ~self.is_basic & (u > 0)
            eligible = movable & (
                (~self.at_upper & (d < -_COST_TOL)) | (self.at_upper & (d > _COST_TOL)))
            if not eligible.any():
                return "optimal"
            j = int(np.flatnonzero(eligible)[0])
            s = -1.0 if self.at_upper[j] else 1.0
            col = s * self.T[:, j]

            best_t = u[j]
            best_row = -1
            best_to_upper = False
            best_var = None
            for r in range(col.size):
                a = col[r]
                if a > _PIVOT_TOL:
                    t = max(self.beta[r], 0.0) / a
                    to_upper = False
                elif a < -_PIVOT_TOL and np.isfinite(u[self.basis[r]]):
                    t = max(u[self.basis[r]] - self.beta[r], 0.0) / (-a)
                    to_upper = True
                else:
                    continue
                var = self.basis[r]
                if best_row < 0:
                    # a bound flip wins ties: it never changes the basis
                    if t < best_t - 1e-12:
                        best_t, best_row, best_to_upper, best_var = t, r, to_upper, var
                elif t < best_t - 1e-12 or (t <= best_t + 1e-12 and var < best_var):
                    best_t, best_row, best_to_upper, best_var = t, r, to_upper, var
            if not np.isfinite(best_t):
                return "unbounded"

            self.iterations += 1
            self.beta -= best_t * col
            if best_row < 0:
                self.at_upper[j] = not self.at_upper[j]
                continue
            entering_value = (u[j] if self.at_upper[j] else 0.0) + s * best_t
            r = best_row
            leaving = self.basis[r]
            self.pivot(r, j)
            self.at_upper[leaving] = best_to_upper
            self.at_upper[j] = False
            self.beta[r] = entering_value
            np.clip(self.beta, 0.0, u[self.basis], out=self.beta)


def _standard_form(lp):
    """Map ``lp`` to ``A' y = b', 0 <= y <= u`` with ``x = offset + M y[:n']``."""
    n = lp.n_vars
    cols = []      # (orig index, sign)
    offset = np.zeros(n)
    ub = []
    for j in range(n):
        lo, hi = lp.lower[j], lp.upper[j]
        if np.isfinite(lo):
            offset[j] = lo
            cols.append((j, 1.0))
            ub.append(hi - lo)
        elif np.isfinite(hi):
            offset[j] = hi
            cols.append((j, -1.0))
            ub.append(np.inf)
        else:
            cols.append((j, 1.0))
            ub.append(np.inf)
            cols.append((j, -1.0))
            ub.append(np.inf)
    M = np.zeros((n, len(cols)))
    for k, (j, sgn) in enumerate(cols):
        M[j, k] = sgn
    if np.any(np.asarray(ub) < 0):
        return None
    A = lp.A @ M
    b = lp.b - lp.A @ offset
    k = lp.n_rows
    n_slack = sum(s != "=" for s in lp.senses)
    S = np.zeros((k, n_slack))
    slack_of_row = [-1] * k
    col = 0
    for i, sense in enumerate(lp.senses):
        if sense == "<=":
            S[i, col] = 1.0
        elif sense == ">=":
            S[i, col] = -1.0
        else:
            continue
        slack_of_row[i] = col
        col += 1
    A_full = np.hstack([A, S])
    u = np.concatenate([np.asarray(ub, dtype=float), np.full(n_slack, np.inf)])
    cost = np.concatenate([lp.c @ M, np.zeros(n_slack)])
    return A_full, b, u, cost, M, offset, slack_of_row


def lp_solve(lp, iteration_cap=20000):
    """Solve ``lp`` with the two-phase bounded-variable primal simplex.

    Parameters
    ----------
    lp : LinearProgram
    iteration_cap : int
        Total pivot/bound-flip budget over both phases.

    Returns
    -------
    SimplexSolution
        ``status`` is one of ``optimal``, ``infeasible``, ``unbounded`` or
        ``iteration_limit``.  ``x`` is the final primal point (NaN-filled when
        infeasible).
    """
    if not isinstance(lp, LinearProgram):
        raise TypeError("lp_solve expects a LinearProgram")
    n = lp.n_vars
    nan_x = np.full(n, np.nan)
    std = _standard_form(lp)
    if std is None:
        return SimplexSolution("infeasible", nan_x, np.nan)
    A, b, u, cost, M, offset, slack_of_row = std
    k, n_std = A.shape

    # rows with negative rhs are negated so the start point y = 0 has b >= 0
    neg = b < 0
    A[neg] *= -1.0
    b = np.where(neg, -b, b)

    # a slack with coefficient +1 starts basic; every other row gets an artificial
    row_basis = []
    art_rows = []
    for i in range(k):
        sc = slack_of_row[i]
        if sc >= 0 and A[i, M.shape[1] + sc] > 0:
            row_basis.append(M.shape[1] + sc)
        else:
            row_basis.append(n_std + len(art_rows))
            art_rows.append(i)
    n_art = len(art_rows)
    if n_art:
        Art = np.zeros((k, n_art))
        Art[art_rows, np.arange(n_art)] = 1.0
        A = np.hstack([A, Art])
        u = np.concatenate([u, np.full(n_art, np.inf)])
        cost = np.concatenate([cost, np.zeros(n_art)])

    tab = _Tableau(A, b, u, row_basis)
    phase1_iters = 0
    if n_art:
        c1 = np.zeros(A.shape[1])
        c1[n_std:] = 1.0
        status = tab.run(c1, iteration_cap)
        phase1_iters = tab.iterations
        if status == "iteration_limit":
            return SimplexSolution("iteration_limit", nan_x, np.nan,
                                   iterations=tab.iterations, phase1_iterations=phase1_iters)
        infeas = float(tab.point()[n_std:].sum())
        if infeas > _FEAS_TOL * (1.0 + float(np.abs(b).max(initial=0.0))):
            return SimplexSolution("infeasible", nan_x, np.nan,
                                   iterations=tab.iterations, phase1_iterations=phase1_iters)
        # drive zero-valued artificials out of the basis, dropping redundant rows
        keep_rows = []
        for r in range(k):
            var = tab.basis[r]
            if var < n_std:
                keep_rows.append(r)
                continue
            cand = np.flatnonzero((np.abs(tab.T[r, :n_std]) > _PIVOT_TOL) & ~tab.is_basic[:n_std])
            if cand.size:
                j = int(cand[0])
                value = tab.u[j] if tab.at_upper[j] else 0.0
                tab.pivot(r, j)
                tab.at_upper[j] = False
                tab.beta[r] = value
                keep_rows.append(r)
        tab.T = tab.T[keep_rows][:, :n_std]
        tab.beta = tab.beta[keep_rows]
        tab.basis = [tab.basis[r] for r in keep_rows]
        tab.u = tab.u[:n_std]
        tab.is_basic = tab.is_basic[:n_std]
        tab.at_upper = tab.at_upper[:n_std]
        cost = cost[:n_std]

    status = tab.run(cost, iteration_cap)
    y = tab.point()
    x = offset + M @ y[:M.shape[1]]
    value = float(lp.c @ x)
    return SimplexSolution(
        status, x, value,
        basis=tuple(int(v) for v in tab.basis),
        at_upper=tuple(int(v) for v in np.flatnonzero(tab.at_upper & ~tab.is_basic)),
        iterations=tab.iterations, phase1_iterations=phase1_iters)
