"""Small embedding producers used to exercise the metrics end to end.

Only PCA (on a one-sided Jacobi SVD), a Gaussian random projection and a row
shuffle. These are fixtures, not a dimensionality-reduction library.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .core import validate_matrix
from .exceptions import DimensionMismatchError, InvalidTargetDimError, SvdNonConvergenceError, TooFewSamplesError


def jacobi_svd(A, tol=1e-10, max_sweeps=100):
    """Thin SVD by one-sided (Hestenes) Jacobi rotations.

    Returns ``(s, V)`` with singular values descending and the matching right
    singular vectors as columns of ``V``. Left vectors are not needed here.
    """
    U = np.array(A, dtype=np.float64, copy=True)
    p = U.shape[1]
    V = np.eye(p)
    # column pairs this small are round-off from null directions; leave them be
    negligible = U.shape[0] * np.finfo(np.float64).eps * np.einsum("ij,ij->", U, U)
    for _ in range(max_sweeps):
        rotated = False
        for j in range(p - 1):
            for k in range(j + 1, p):
                alpha = U[:, j] @ U[:, j]
                beta = U[:, k] @ U[:, k]
                gamma = U[:, j] @ U[:, k]
                norm_ab = np.sqrt(alpha * beta)
                if gamma == 0.0 or abs(gamma) <= tol * norm_ab or norm_ab <= negligible:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                uj, uk = U[:, j].copy(), U[:, k]
                U[:, j] = c * uj - s * uk
                U[:, k] = s * uj + c * uk
                vj, vk = V[:, j].copy(), V[:, k]
                V[:, j] = c * vj - s * vk
                V[:, k] = s * vj + c * vk
        if not rotated:
            break
    else:
        raise SvdNonConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    s = np.sqrt(np.einsum("ij,ij->j", U, U))
    order = np.argsort(-s, kind="stable")
    return s[order], V[:, order]


class PCA(TransformerMixin, BaseEstimator):
    """Principal component projection.

    Components are the top right singular vectors of the centred data, each
    signed so its largest-magnitude entry is positive.

    Attributes
    ----------
    mean_ : ndarray of shape (n_features,)
    components_ : ndarray of shape (n_components, n_features)
        Orthonormal rows.
    singular_values_ : ndarray of shape (n_components,)
    """

    def __init__(self, n_components=2, tol=1e-10, max_sweeps=100):
        self.n_components = n_components
        self.tol = tol
        self.max_sweeps = max_sweeps

    def fit(self, X, y=None):
        X = validate_matrix(X)
        n, p = X.shape
        q = self.n_components
        if not 1 <= q <= min(n, p):
            raise InvalidTargetDimError(f"n_components must be in 1..{min(n, p)}, got {q}")
        self.mean_ = X.mean(axis=0)
        s, V = jacobi_svd(X - self.mean_, self.tol, self.max_sweeps)
        comps = V[:, :q].T.copy()
        lead = np.argmax(np.abs(comps), axis=1)
        comps *= np.sign(comps[np.arange(q), lead])[:, None]
        self.components_ = comps
        self.singular_values_ = s[:q]
        return self

    def transform(self, X):
        if not hasattr(self, "components_"):
            raise NotFittedError("PCA is not fitted yet")
        X = validate_matrix(X)
        if X.shape[1] != self.mean_.shape[0]:
            raise DimensionMismatchError(
                f"fitted on {self.mean_.shape[0]} features, got {X.shape[1]}")
        return (X - self.mean_) @ self.components_.T


def fit_pca(X, n_components) -> PCA:
    return PCA(n_components).fit(X)


class RandomProjection(TransformerMixin, BaseEstimator):
    """Gaussian random linear map to ``n_components`` dimensions."""

    def __init__(self, n_components=2, seed=42):
        self.n_components = n_components
        self.seed = seed

    def fit(self, X, y=None):
        X = validate_matrix(X)
        if self.n_components < 1:
            raise InvalidTargetDimError("n_components must be positive")
        rng = np.random.Generator(np.random.PCG64(self.seed))
        self.components_ = rng.normal(size=(self.n_components, X.shape[1])) / np.sqrt(self.n_components)
        return self

    def transform(self, X):
        if not hasattr(self, "components_"):
            raise NotFittedError("RandomProjection is not fitted yet")
        X = validate_matrix(X)
        if X.shape[1] != self.components_.shape[1]:
            raise DimensionMismatchError(
                f"fitted on {self.components_.shape[1]} features, got {X.shape[1]}")
        return X @ self.components_.T


def shuffle_embedding(X, seed=42) -> np.ndarray:
    """Rows of ``X`` in a seeded random order: same point cloud, broken correspondence."""
    X = validate_matrix(X)
    if X.shape[0] < 2:
        raise TooFewSamplesError("shuffling needs at least 2 rows")
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(X.shape[0])
    return X[perm]
