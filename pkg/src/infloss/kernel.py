"""Gaussian kernel ridge weights.

The weights ``alpha(x) = (K + n*lam*I)^{-1} v(x)`` turn the training sets into
a signed approximation of the conditional weak distribution at ``x``.  When
the same query set is scored against a fixed loss table ``L`` (one row per
training sample), solving ``beta = (K + n*lam*I)^{-1} L`` once and taking
``v(x) @ beta`` is cheaper than forming ``alpha`` per query; both paths are
provided.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

__all__ = [
    "RidgeModel",
    "gaussian_kernel",
    "gaussian_gram",
    "gram",
    "ridge_factorize",
    "fit_ridge",
    "alpha_weights",
    "train_scores",
    "predict_scores",
    "heuristic_sigma",
    "heuristic_lambda",
]


def gaussian_kernel(x, x2, sigma):
    """``exp(-||x - x2||^2 / (2 sigma^2))``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    if x.shape != x2.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {x2.shape}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return float(np.exp(-np.sum((x - x2) ** 2) / (2.0 * sigma ** 2)))


def _as_features(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"feature matrix must be (n >= 1, d >= 1), got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")
    return X


def gaussian_gram(X, Y, sigma):
    """Cross Gram matrix ``k(X[i], Y[j])`` for the Gaussian kernel."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    X = _as_features(X)
    Y = _as_features(Y)
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    sq = (X ** 2).sum(1)[:, None] + (Y ** 2).sum(1)[None, :] - 2.0 * X @ Y.T
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-sq / (2.0 * sigma ** 2))


def gram(X, sigma, kernel=None):
    """Symmetric Gram matrix of the rows of ``X``.

    ``kernel`` is an optional callable ``kernel(A, B) -> (len(A), len(B))``
    replacing the Gaussian kernel (e.g. a linear kernel in tests).
    """
    X = _as_features(X)
    if kernel is None:
        K = gaussian_gram(X, X, sigma)
        np.fill_diagonal(K, 1.0)
    else:
        K = np.asarray(kernel(X, X), dtype=float)
    return 0.5 * (K + K.T)


@dataclass(frozen=True)
class RidgeModel:
    """Cholesky factor of ``K + n*lam*I`` plus what is needed to build ``v(x)``."""

    factor: tuple
    n: int
    lam: float
    sigma: float = None
    X: np.ndarray = None
    kernel: object = None

    @property
    def shifted_gram(self):
        c, lower = self.factor
        L = np.tril(c) if lower else np.triu(c).T
        return L @ L.T

    def kernel_vector(self, Xq):
        """``v(x)`` for every query row: shape ``(n_queries, n)``."""
        if self.X is None:
            raise ValueError("model was built from a bare Gram matrix; pass v(x) explicitly")
        Xq = np.asarray(Xq, dtype=float)
        if Xq.ndim == 1:
            Xq = Xq[None, :] if Xq.size == self.X.shape[1] else Xq[:, None]
        if Xq.shape[1] != self.X.shape[1]:
            raise ValueError(f"query dimension {Xq.shape[1]} != training dimension {self.X.shape[1]}")
        if self.kernel is None:
            return gaussian_gram(Xq, self.X, self.sigma)
        return np.asarray(self.kernel(Xq, self.X), dtype=float)

    def solve(self, rhs):
        return cho_solve(self.factor, np.asarray(rhs, dtype=float))


def ridge_factorize(K, lam, X=None, sigma=None, kernel=None):
    """Factor ``K + n*lam*I``.

    ``lam = 0`` is accepted when ``K`` itself is positive definite.

    Raises
    ------
    numpy.linalg.LinAlgError
        When the shifted matrix is not numerically positive definite (this
        signals non-finite or degenerate inputs).
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError("Gram matrix must be square")
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    if not np.all(np.isfinite(K)):
        raise np.linalg.LinAlgError("Gram matrix has non-finite entries")
    n = K.shape[0]
    Kl = K + n * lam * np.eye(n)
    factor = cho_factor(Kl, lower=True)
    return RidgeModel(factor, n, float(lam), sigma,
                      None if X is None else _as_features(X), kernel)


def fit_ridge(X, sigma, lam, kernel=None):
    """Gram matrix of ``X`` and its factorization in one call."""
    X = _as_features(X)
    return ridge_factorize(gram(X, sigma, kernel), lam, X=X, sigma=sigma, kernel=kernel)


def alpha_weights(model, x=None, v=None):
    """Weights ``alpha(x)`` solving ``(K + n*lam*I) alpha = v(x)``.

    Pass either a query point ``x`` (requires a model built with features)
    or a precomputed kernel vector ``v``.
    """
    if v is None:
        if x is None:
            raise ValueError("need a query point or a kernel vector")
        v = model.kernel_vector(np.atleast_1d(np.asarray(x, dtype=float))[None, :])[0]
    v = np.asarray(v, dtype=float)
    if v.shape != (model.n,):
        raise ValueError(f"kernel vector must have length {model.n}")
    return model.solve(v)


def train_scores(model, L):
    """``beta = (K + n*lam*I)^{-1} L`` for an ``(n, m)`` loss table."""
    L = np.asarray(L, dtype=float)
    if L.shape[0] != model.n:
        raise ValueError(f"loss table has {L.shape[0]} rows, model has {model.n}")
    return model.solve(L)


def predict_scores(model, beta, Xq):
    """``v(x) @ beta`` for every query row."""
    return model.kernel_vector(Xq) @ beta


def heuristic_sigma(c_sigma, d):
    """Bandwidth ``c_sigma * d`` with ``d`` the raw feature count."""
    return c_sigma * d


def heuristic_lambda(c_lambda, n):
    """Regularization ``c_lambda / sqrt(n)``."""
    return c_lambda * n ** -0.5
