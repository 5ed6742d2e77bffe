"""Shared numeric types, distance kernels and per-cluster medians/radii."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    EmptyInputError,
    EmptySubsetError,
    InputError,
    InvalidClusterCountError,
    NonFiniteError,
    RowCountMismatchError,
)

# upper bound on temporaries in the distance kernel (float64 elements)
_BLOCK_ELEMENTS = 1 << 22


def validate_matrix(raw, name="X") -> np.ndarray:
    """Return ``raw`` as a finite, read-only, C-ordered float64 matrix.

    Rows are samples and columns are features. Raises ``EmptyInputError`` for
    zero rows or columns and ``NonFiniteError`` naming the first bad cell.
    """
    if isinstance(raw, np.ndarray) and raw.dtype == np.float64 and raw.flags.c_contiguous \
            and not raw.flags.writeable:
        X = raw
    else:
        try:
            X = np.array(raw, dtype=np.float64, order="C", copy=True)
        except (TypeError, ValueError) as exc:
            raise InputError(f"{name} is not a numeric matrix: {exc}") from None
    if X.ndim != 2:
        raise InputError(f"{name} must be 2-dimensional, got ndim={X.ndim}")
    if X.shape[0] == 0 or X.shape[1] == 0:
        raise EmptyInputError(f"{name} has shape {X.shape}; need at least one row and column")
    finite = np.isfinite(X)
    if not finite.all():
        row, col = np.argwhere(~finite)[0]
        raise NonFiniteError(int(row), int(col))
    X.flags.writeable = False
    return X


def check_same_rows(X, Xp):
    if X.shape[0] != Xp.shape[0]:
        raise RowCountMismatchError(
            f"original has {X.shape[0]} rows but embedding has {Xp.shape[0]}")


@dataclass(frozen=True)
class ClusterAssignment:
    """Flat partition of ``n`` samples into clusters ``0..n_clusters-1``."""

    labels: np.ndarray
    n_clusters: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise InputError("labels must be a non-empty 1-d vector")
        c = int(self.n_clusters)
        if c < 1 or labels.min() < 0 or labels.max() >= c:
            raise InvalidClusterCountError(f"labels must lie in 0..{c - 1}")
        if np.bincount(labels, minlength=c).min() == 0:
            raise InvalidClusterCountError("every cluster id must occur at least once")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "n_clusters", c)

    @classmethod
    def from_labels(cls, labels) -> "ClusterAssignment":
        """Relabel arbitrary class ids to contiguous ids in sorted-unique order."""
        labels = np.asarray(labels)
        if labels.ndim != 1 or labels.size == 0:
            raise InputError("labels must be a non-empty 1-d vector")
        uniq, inverse = np.unique(labels, return_inverse=True)
        return cls(inverse.reshape(-1), len(uniq))

    def __len__(self):
        return self.labels.shape[0]

    def members(self):
        """Yield ``(k, row_indices)`` for each cluster, indices ascending."""
        order = np.argsort(self.labels, kind="stable")
        bounds = np.concatenate(([0], np.cumsum(np.bincount(self.labels, minlength=self.n_clusters))))
        for k in range(self.n_clusters):
            yield k, order[bounds[k]:bounds[k + 1]]


def as_assignment(labels, n) -> ClusterAssignment:
    a = labels if isinstance(labels, ClusterAssignment) else ClusterAssignment.from_labels(labels)
    if len(a) != n:
        raise RowCountMismatchError(f"{len(a)} labels for {n} samples")
    return a


@dataclass(frozen=True)
class ClusterSummary:
    """Per-cluster medians (plus the whole-data median as the last row) and radii."""

    medians: np.ndarray
    radii: np.ndarray

    @property
    def n_clusters(self):
        return self.radii.shape[0]

    @property
    def global_median(self):
        return self.medians[-1]


def coordinatewise_median(points) -> np.ndarray:
    """Per-column median; even counts average the two middle order statistics."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[None, :]
    if points.shape[0] == 0:
        raise EmptySubsetError("median of an empty set of points")
    return np.median(points, axis=0)


def pairwise_sq_dist_to_rows(X, targets) -> np.ndarray:
    """Squared Euclidean distances between every row of ``X`` and every target row.

    Differences are formed explicitly (no ``|a|^2 + |b|^2 - 2ab`` expansion) and
    processed in row blocks so the temporary stays bounded.
    """
    X = np.asarray(X, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if targets.ndim == 1:
        targets = targets[None, :]
    if X.ndim != 2 or X.shape[1] != targets.shape[1]:
        raise DimensionMismatchError(
            f"cannot compare rows of width {X.shape[-1]} with targets of width {targets.shape[1]}")
    n, t = X.shape[0], targets.shape[0]
    out = np.empty((n, t))
    block = max(1, _BLOCK_ELEMENTS // max(1, t * X.shape[1]))
    for start in range(0, n, block):
        diff = X[start:start + block, None, :] - targets[None, :, :]
        np.einsum("ijk,ijk->ij", diff, diff, out=out[start:start + block])
    return out


def row_distances(X, centers) -> np.ndarray:
    """Euclidean distance from row ``i`` of ``X`` to row ``i`` of ``centers``."""
    diff = X - centers
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def _summarize(X, a: ClusterAssignment):
    medians = np.empty((a.n_clusters + 1, X.shape[1]))
    radii = np.empty(a.n_clusters)
    for k, idx in a.members():
        Z = X[idx]
        mu = np.median(Z, axis=0)
        far = np.sqrt(np.einsum("ij,ij->i", Z - mu, Z - mu).max())
        medians[k] = mu
        radii[k] = far if far > 0 else 1.0
    medians[-1] = np.median(X, axis=0)
    return medians, radii


def cluster_summary(X, a) -> ClusterSummary:
    """Medians and radii of every cluster of ``a`` in the space of ``X``.

    A radius is the largest distance from a member to its cluster median, or 1
    when every member coincides with the median (singletons included).
    """
    X = validate_matrix(X)
    a = as_assignment(a, X.shape[0])
    medians, radii = _summarize(X, a)
    medians.flags.writeable = False
    radii.flags.writeable = False
    return ClusterSummary(medians, radii)
