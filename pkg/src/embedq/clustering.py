"""Agglomerative clustering producing a dendrogram and flat cuts of it."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .core import ClusterAssignment, pairwise_sq_dist_to_rows, validate_matrix
from .exceptions import ClusteringTooLargeError, InputError, InvalidClusterCountError, TooFewSamplesError

LINKAGES = ("ward", "average", "complete", "single")
DEFAULT_MAX_SAMPLES = 20_000


@dataclass(frozen=True)
class Dendrogram:
    """Merge history in the usual layout: leaves are ``0..n-1`` and merge ``t``
    creates node ``n + t``.

    ``merges`` is an ``(n-1, 4)`` float array of
    ``(left_node, right_node, distance, new_size)``; the left child is the one
    holding the smaller sample index.
    """

    merges: np.ndarray
    n: int

    def __post_init__(self):
        if self.merges.shape != (self.n - 1, 4):
            raise InputError(f"expected {self.n - 1} merges, got {self.merges.shape[0]}")

    @property
    def distances(self):
        return self.merges[:, 2]


def _lance_williams(linkage, d_ak, d_bk, d_ab, size_a, size_b, size_k):
    if linkage == "single":
        return np.minimum(d_ak, d_bk)
    if linkage == "complete":
        return np.maximum(d_ak, d_bk)
    if linkage == "average":
        return (size_a * d_ak + size_b * d_bk) / (size_a + size_b)
    # ward, on plain (not squared) Euclidean distances
    total = size_a + size_b + size_k
    sq = ((size_a + size_k) * d_ak ** 2 + (size_b + size_k) * d_bk ** 2 - size_k * d_ab ** 2) / total
    return np.sqrt(np.maximum(sq, 0.0))


def agglomerate(X, linkage="ward", max_samples=DEFAULT_MAX_SAMPLES) -> Dendrogram:
    """Build the full merge tree of ``X`` by repeatedly joining the closest pair.

    Among equally close pairs the one whose smallest member indices are
    lexicographically smallest is merged first, so the tree is deterministic.
    Uses O(n^2) memory; ``n > max_samples`` raises ``ClusteringTooLargeError``.
    """
    if linkage not in LINKAGES:
        raise InputError(f"unknown linkage {linkage!r}; choose from {LINKAGES}")
    X = validate_matrix(X)
    n = X.shape[0]
    if n < 2:
        raise TooFewSamplesError("agglomerative clustering needs at least 2 samples")
    if max_samples is not None and n > max_samples:
        raise ClusteringTooLargeError(
            f"{n} samples exceeds the clustering cap of {max_samples}; "
            "use supervised mode (class labels as clusters) instead", n=n, cap=max_samples)

    # Slot s holds the active cluster whose smallest member is sample s, so
    # comparing slots is comparing smallest member indices. Only the upper
    # triangle (column > row) is consulted for nearest neighbours.
    D = np.sqrt(pairwise_sq_dist_to_rows(X, X))
    D[np.tril_indices(n)] = np.inf
    nn_idx = np.empty(n, dtype=np.int64)
    nn_dist = np.empty(n)
    nn_idx[:-1] = np.argmin(D[:-1], axis=1)
    nn_dist[:-1] = D[np.arange(n - 1), nn_idx[:-1]]
    nn_idx[-1], nn_dist[-1] = -1, np.inf

    size = np.ones(n, dtype=np.int64)
    node = np.arange(n)
    active = np.ones(n, dtype=bool)
    merges = np.empty((n - 1, 4))

    for step in range(n - 1):
        a = int(np.argmin(nn_dist))
        b = int(nn_idx[a])
        d_ab = nn_dist[a]
        merges[step] = (node[a], node[b], d_ab, size[a] + size[b])

        # symmetric views of the rows of a and b over all active slots
        col_a = np.where(np.arange(n) < a, D[:, a], D[a, :])
        col_b = np.where(np.arange(n) < b, D[:, b], D[b, :])
        others = active.copy()
        others[[a, b]] = False
        new = np.full(n, np.inf)
        new[others] = _lance_williams(linkage, col_a[others], col_b[others], d_ab,
                                      size[a], size[b], size[others])

        active[b] = False
        D[b, :] = np.inf
        D[:, b] = np.inf
        nn_dist[b], nn_idx[b] = np.inf, -1
        D[:a, a] = new[:a]
        D[a, a + 1:] = new[a + 1:]
        size[a] += size[b]
        node[a] = n + step

        # rows whose cached neighbour changed; rows before a may simply improve
        stale = np.flatnonzero((nn_idx == a) | (nn_idx == b))
        stale = np.union1d(stale, [a])
        before = np.arange(a)
        better = before[(new[:a] < nn_dist[:a]) | ((new[:a] == nn_dist[:a]) & (a < nn_idx[:a]))]
        nn_dist[better] = new[better]
        nn_idx[better] = a
        for r in stale:
            if r >= n - 1 or not active[r]:
                continue
            j = int(np.argmin(D[r, r + 1:])) + r + 1
            nn_idx[r], nn_dist[r] = j, D[r, j]
            if not np.isfinite(nn_dist[r]):
                nn_idx[r] = -1

    return Dendrogram(merges, n)


def cut(dendrogram: Dendrogram, n_clusters: int) -> ClusterAssignment:
    """Flat partition obtained by undoing the last ``n_clusters - 1`` merges.

    Clusters are numbered in order of their smallest sample index.
    """
    n = dendrogram.n
    if not 1 <= n_clusters <= n:
        raise InvalidClusterCountError(f"n_clusters must be in 1..{n}, got {n_clusters}")
    parent = np.arange(2 * n - 1)

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for t in range(n - n_clusters):
        left, right = int(dendrogram.merges[t, 0]), int(dendrogram.merges[t, 1])
        parent[root(left)] = n + t
        parent[root(right)] = n + t
        parent[n + t] = n + t

    roots = np.array([root(i) for i in range(n)])
    # first occurrence order == smallest member order
    _, first = np.unique(roots, return_index=True)
    rank = {roots[f]: k for k, f in enumerate(np.sort(first))}
    return ClusterAssignment(np.array([rank[r] for r in roots]), n_clusters)


class AgglomerativeClustering(ClusterMixin, BaseEstimator):
    """Estimator wrapper around :func:`agglomerate` and :func:`cut`.

    Parameters
    ----------
    n_clusters : int
        Number of flat clusters to extract.
    linkage : {"ward", "average", "complete", "single"}
    max_samples : int or None
        Refuse inputs larger than this (the dissimilarity store is n x n).

    Attributes
    ----------
    dendrogram_ : Dendrogram
    labels_ : ndarray of shape (n_samples,)
    """

    def __init__(self, n_clusters=2, linkage="ward", max_samples=DEFAULT_MAX_SAMPLES):
        self.n_clusters = n_clusters
        self.linkage = linkage
        self.max_samples = max_samples

    def fit(self, X, y=None):
        self.dendrogram_ = agglomerate(X, self.linkage, self.max_samples)
        self.assignment_ = cut(self.dendrogram_, self.n_clusters)
        self.labels_ = np.asarray(self.assignment_.labels)
        return self
