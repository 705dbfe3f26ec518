"""Corruption processes and synthetic problems for the four tasks.

Every corruption returns a set that contains the true label.  Randomness
comes from :func:`rng_stream`, a counter-based Philox generator keyed by a
seed and a tuple of labels, so independent work items (task, fold, grid cell)
get independent, reproducible streams without sharing state.
"""

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .kendall import kendall_embed, transitive_closure, pair_indices
from .multilabel import HammingBall
from .regression import phase_loss_sets

__all__ = [
    "RngStream",
    "rng_stream",
    "corrupt_uniform_class",
    "corrupt_skewed_class",
    "corrupt_ranking",
    "corrupt_multilabel_ball",
    "generate_unbalanced_blobs",
    "generate_voronoi_classes",
    "generate_ordering_lines",
    "generate_multilabel",
    "generate_phase_regression",
    "phase_signal",
]


def _label_key(label):
    if isinstance(label, (int, np.integer)):
        if label < 0:
            raise ValueError("integer stream labels must be non-negative")
        return int(label)
    # stable across runs, unlike hash()
    return zlib.crc32(str(label).encode("utf-8"))


@dataclass(frozen=True)
class RngStream:
    """A 64-bit seed and a stream label such as ``("classification", fold, cell)``."""

    seed: int
    label: tuple = ()

    def generator(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=tuple(_label_key(x) for x in self.label))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, *more):
        return RngStream(self.seed, tuple(self.label) + more)


def rng_stream(seed, *label):
    """Generator for the stream ``(seed, label)``."""
    return RngStream(int(seed), label).generator()


def corrupt_uniform_class(y, m, c, rng):
    """``{y}`` plus every other class independently with probability ``c``."""
    if not 0 <= c <= 1:
        raise ValueError("c must lie in [0, 1]")
    S = rng.random(m) < c
    S[y] = True
    return S


def corrupt_skewed_class(y, y_major, m, c, rng):
    """Only samples of the majority class get corrupted (uniformly, at rate ``c``)."""
    if y != y_major:
        S = np.zeros(m, dtype=bool)
        S[y] = True
        return S
    return corrupt_uniform_class(y, m, c, rng)


def corrupt_ranking(y, scores, c, rng=None):
    """Keep the pair ``(j, k)`` iff ``|v_j - v_k| / max |v - v'| < c``, then close.

    The process is deterministic given the scores; ``rng`` is accepted for a
    uniform signature.  ``c = 0`` keeps nothing, any ``c > 1`` keeps every pair.
    """
    phi = kendall_embed(y)
    v = np.asarray(scores, dtype=float)
    I, J = pair_indices(v.size)
    gap = np.abs(v[I] - v[J])
    span = gap.max() if gap.size else 0.0
    d = gap / span if span > 0 else np.zeros_like(gap)
    keep = d < c
    fixed = {(int(i), int(j)): int(s) for i, j, s, k in zip(I, J, phi, keep) if k}
    return transitive_closure(fixed, v.size)


def corrupt_multilabel_ball(y, c, rng):
    """Ball of radius ``r ~ U[0, c (m + 1)]`` around ``y`` with ``floor(r)`` coordinates,
    drawn with replacement, flipped."""
    if not 0 <= c <= 1:
        raise ValueError("c must lie in [0, 1]")
    y = np.asarray(y, dtype=np.int8)
    m = y.size
    r = rng.uniform(0.0, c * (m + 1))
    center = y.copy()
    flips = np.unique(rng.integers(0, m, size=int(math.floor(r))))
    center[flips] *= -1
    return HammingBall(center, r)


def generate_unbalanced_blobs(n, m, majority_frac, d, rng, spread=1.0, separation=2.0):
    """Gaussian class blobs with class 0 holding ``ceil(majority_frac * n)`` points.

    Class centers sit evenly on a circle of radius ``separation``; each blob
    has isotropic standard deviation ``spread``.
    The other classes share the remainder as evenly as possible (lower
    classes get the extra points).  Returns ``(X, y)`` in shuffled order.
    """
    if not 1.0 / m - 1e-12 <= majority_frac < 1:
        raise ValueError(f"majority_frac must lie in [1/m, 1), got {majority_frac}")
    n0 = min(n, math.ceil(majority_frac * n - 1e-9))
    rest = n - n0
    counts = [n0] + [rest // (m - 1) + (k < rest % (m - 1)) for k in range(m - 1)]
    # centers evenly spaced on a circle of radius `separation` in the first two axes
    ang = 2.0 * np.pi * np.arange(m) / m
    centers = np.zeros((m, d))
    centers[:, 0] = separation * np.cos(ang)
    if d > 1:
        centers[:, 1] = separation * np.sin(ang)
    y = np.repeat(np.arange(m), counts)
    X = centers[y] + spread * rng.standard_normal((n, d))
    order = rng.permutation(n)
    return X[order], y[order]


def generate_voronoi_classes(n, m, d, rng):
    """Deterministic labelling: ``x ~ U[0, 1]^d`` labelled by the nearest of
    ``m`` fixed prototypes drawn once from the same stream."""
    protos = rng.random((m, d))
    X = rng.random((n, d))
    y = np.argmin(((X[:, None, :] - protos[None]) ** 2).sum(-1), axis=1)
    return X, y, protos


def generate_ordering_lines(m, n, rng, a=None, b=None):
    """Items scored by lines ``v(x) = a x + b`` on ``x ~ U[0, 1]``.

    Returns ``(x, perms, scores)``; the highest score is ranked first and
    equal scores put the smaller item first.  ``a`` and ``b`` default to
    standard-normal draws.
    """
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    a = rng.standard_normal(m) if a is None else np.asarray(a, dtype=float)
    b = rng.standard_normal(m) if b is None else np.asarray(b, dtype=float)
    x = rng.random(n)
    scores = x[:, None] * a[None, :] + b[None, :]
    order = np.lexsort((np.broadcast_to(np.arange(m), scores.shape), -scores), axis=1)
    perms = np.empty_like(order)
    np.put_along_axis(perms, order, np.arange(m)[None, :].repeat(n, 0), axis=1)
    return x, perms, scores


def generate_multilabel(n, m, d, rng, W=None, noise=0.0):
    """Tags ``sign(W x + b)`` for ``x ~ N(0, I_d)``; deterministic unless ``noise > 0``."""
    if W is None:
        W = rng.standard_normal((m, d))
    bias = 0.5 * rng.standard_normal(m)
    X = rng.standard_normal((n, d))
    scores = X @ W.T + bias + noise * rng.standard_normal((n, m))
    Y = np.where(scores > 0, 1, -1).astype(np.int8)
    return X, Y


def phase_signal(x):
    """Default deterministic signal for the phase-regression synthetic."""
    return 3.0 * np.sin(2.0 * np.pi * x)


def generate_phase_regression(n, rng, p_phase=0.3, width_lo=1.0, width_hi=1.0, signal=phase_signal):
    """``x ~ U[0, 1]``, ``y = signal(x)`` and a phase-loss candidate set per sample."""
    x = rng.random(n)
    y = signal(x)
    sets = [phase_loss_sets(v, p_phase, width_lo, width_hi, rng) for v in y]
    return x, y, sets
