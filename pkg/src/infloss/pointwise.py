"""Exact pointwise quantities over a finite output set.

A weak distribution ``tau`` is a mapping from candidate sets to
probabilities.  Sets may be given as bitmask integers or as iterables of
output indices; :func:`as_weak_dist` normalizes either form to a
``{bitmask: probability}`` dict.  Losses are ``(m, m)`` arrays indexed as
``loss[z, y]`` (prediction ``z``, label ``y``).

Every argmin breaks ties towards the smallest output index.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AmbiguousDistributionError",
    "Disambiguation",
    "RULES",
    "as_weak_dist",
    "check_loss",
    "mask_of",
    "members",
    "infimum_risk",
    "average_risk",
    "supremum_risk",
    "risks",
    "ac_marginal",
    "predict",
    "disambiguate",
    "intersection",
    "ambiguity_eta",
    "discrepancy_nu",
    "comparison_constant",
    "tightest_constant",
]

RULES = ("IL", "AC", "SP")
MAX_OUTPUTS = 24
_TIE = 1e-12


class AmbiguousDistributionError(ValueError):
    """The intersection of the charged sets is not a singleton."""


def mask_of(subset):
    if isinstance(subset, (int, np.integer)):
        return int(subset)
    mask = 0
    for y in subset:
        mask |= 1 << int(y)
    return mask


def members(mask, m):
    return [y for y in range(m) if mask >> y & 1]


def as_weak_dist(tau, m):
    """Validate ``tau`` and return it as ``{bitmask: probability}``."""
    if m > MAX_OUTPUTS:
        raise ValueError(f"bitset representation supports at most {MAX_OUTPUTS} outputs")
    out = {}
    for subset, p in dict(tau).items():
        mask = mask_of(subset)
        if mask == 0:
            raise ValueError("weak distribution charges the empty set")
        if mask >> m:
            raise ValueError(f"set {subset!r} has outputs outside range({m})")
        if p < 0:
            raise ValueError("negative probability")
        if p > 0:
            out[mask] = out.get(mask, 0.0) + float(p)
    if abs(sum(out.values()) - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {sum(out.values())!r}, not 1")
    return out


def check_loss(loss):
    """Return ``loss`` as a float array after checking it is proper."""
    loss = np.asarray(loss, dtype=float)
    if loss.ndim != 2 or loss.shape[0] != loss.shape[1]:
        raise ValueError("loss must be a square matrix")
    if np.any(np.diag(loss) != 0):
        raise ValueError("loss must vanish on the diagonal")
    off = ~np.eye(loss.shape[0], dtype=bool)
    if np.any(loss[off] <= 0):
        raise ValueError("loss must be positive off the diagonal")
    return loss


def _prepare(tau, loss):
    loss = check_loss(loss)
    return as_weak_dist(tau, loss.shape[0]), loss


def _set_risk(z, tau, loss, reduce):
    m = loss.shape[0]
    return sum(p * reduce(loss[z, members(mask, m)]) for mask, p in tau.items())


def infimum_risk(z, tau, loss):
    """``sum_S tau(S) * min_{y in S} loss[z, y]``."""
    tau, loss = _prepare(tau, loss)
    return _set_risk(z, tau, loss, np.min)


def average_risk(z, tau, loss):
    """``sum_S tau(S) * mean_{y in S} loss[z, y]``."""
    tau, loss = _prepare(tau, loss)
    return _set_risk(z, tau, loss, np.mean)


def supremum_risk(z, tau, loss):
    """``sum_S tau(S) * max_{y in S} loss[z, y]``."""
    tau, loss = _prepare(tau, loss)
    return _set_risk(z, tau, loss, np.max)


_REDUCERS = {"IL": np.min, "AC": np.mean, "SP": np.max}


def risks(tau, loss, rule="IL"):
    """Risk of every output under ``rule`` as an array of length ``m``."""
    if rule not in _REDUCERS:
        raise ValueError(f"rule must be one of {RULES}")
    tau, loss = _prepare(tau, loss)
    return np.array([_set_risk(z, tau, loss, _REDUCERS[rule]) for z in range(loss.shape[0])])


def _argmin(values):
    values = np.asarray(values, dtype=float)
    best = values.min()
    return int(np.flatnonzero(values <= best + _TIE * (1.0 + abs(best)))[0])


def ac_marginal(tau, m):
    """Label distribution obtained by drawing uniformly inside each set."""
    tau = as_weak_dist(tau, m)
    rho = np.zeros(m)
    for mask, p in tau.items():
        ys = members(mask, m)
        rho[ys] += p / len(ys)
    return rho


def predict(tau, loss, rule="IL"):
    return _argmin(risks(tau, loss, rule))


@dataclass
class Disambiguation:
    """Chosen output, per-set label choice, and the infimum risk they achieve."""

    output: int
    choice: dict
    risk: float


def disambiguate(tau, loss):
    """Infimum-loss prediction and the closest label inside each charged set."""
    tau, loss = _prepare(tau, loss)
    m = loss.shape[0]
    z = _argmin([_set_risk(k, tau, loss, np.min) for k in range(m)])
    choice = {}
    risk = 0.0
    for mask, p in tau.items():
        ys = members(mask, m)
        y = ys[_argmin(loss[z, ys])]
        choice[mask] = y
        risk += p * loss[z, y]
    return Disambiguation(z, choice, risk)


def intersection(tau, m):
    """Outputs shared by every charged set."""
    tau = as_weak_dist(tau, m)
    common = (1 << m) - 1
    for mask in tau:
        common &= mask
    return members(common, m)


def ambiguity_eta(tau, m):
    """``1 - max_{z not in S_x} P(z in S)``, or None when ambiguous.

    Returns 1.0 when only sets equal to the singleton ``S_x`` are charged.
    """
    tau = as_weak_dist(tau, m)
    common = intersection(tau, m)
    if len(common) != 1:
        return None
    inclusion = np.zeros(m)
    for mask, p in tau.items():
        inclusion[members(mask, m)] += p
    others = [z for z in range(m) if z != common[0]]
    if not others:
        return 1.0
    return float(1.0 - inclusion[others].max())


def discrepancy_nu(loss):
    """``log max_{z, y, z' != z} loss[z, y] / loss[z, z']``."""
    loss = check_loss(loss)
    m = loss.shape[0]
    if m < 2:
        return 0.0
    ratio = 0.0
    for z in range(m):
        row = np.delete(loss[z], z)
        ratio = max(ratio, row.max() / row.min())
    return math.log(ratio)


def _strict_output(tau, m):
    eta = ambiguity_eta(tau, m)
    if eta is None:
        raise AmbiguousDistributionError("intersection of charged sets is not a singleton")
    return intersection(tau, m)[0], eta


def comparison_constant(loss, tau):
    """``exp(nu) / eta`` for a strictly non-ambiguous ``tau``."""
    loss = check_loss(loss)
    _, eta = _strict_output(tau, loss.shape[0])
    if eta <= 0:
        raise AmbiguousDistributionError("eta = 0: distribution is not strictly non-ambiguous")
    return math.exp(discrepancy_nu(loss)) / eta


def tightest_constant(loss, tau):
    """Smallest ``C`` with ``loss[z, y*] <= C (R(z) - R(y*))`` for every ``z``.

    Computed by enumerating outputs.  A zero risk gap with a positive loss
    yields ``inf``.
    """
    tau, loss = _prepare(tau, loss)
    m = loss.shape[0]
    y_star, _ = _strict_output(tau, m)
    r_star = _set_risk(y_star, tau, loss, np.min)
    best = 0.0
    for z in range(m):
        if z == y_star:
            continue
        gap = _set_risk(z, tau, loss, np.min) - r_star
        if gap <= 0:
            return math.inf
        best = max(best, loss[z, y_star] / gap)
    return best
