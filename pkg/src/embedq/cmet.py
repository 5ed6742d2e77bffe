"""Cluster-guided local and global shape-preservation scores.

Both scores compare an original dataset ``X`` (n x p) with an embedding
``Xp`` (n x q) through one shared cluster assignment:

* local: each sample's distance to its cluster median, divided by the
  cluster radius, is compared between the two spaces;
  ``1 - ||d - d'|| / sqrt(n)``.
* global: pairwise distances among the cluster medians and the whole-data
  median, each matrix scaled by its own maximum, are compared;
  ``1 - ||G - G'||_F / sqrt(c (c + 1))``.

Medians are coordinate-wise. Both scores lie in [0, 1] and equal 1 for a
perfect embedding. Cost is O(n p log n) time and O(n p) memory; no n x n
object is ever built.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .clustering import DEFAULT_MAX_SAMPLES, agglomerate, cut
from .core import (
    ClusterAssignment,
    ClusterSummary,
    _summarize,
    as_assignment,
    check_same_rows,
    cluster_summary,
    pairwise_sq_dist_to_rows,
    row_distances,
    validate_matrix,
)
from .exceptions import InconsistentSummaryError, InputError

SUPERVISED = "supervised"
UNSUPERVISED = "unsupervised"


@dataclass(frozen=True)
class CmetScore:
    local: float
    global_: float
    mode: str
    n_clusters: int
    n: int
    p: int
    q: int
    # values before clamping into [0, 1]
    local_raw: float
    global_raw: float

    def as_dict(self):
        return asdict(self)

    def __iter__(self):
        return iter((self.local, self.global_))


def normalized_distances(X, a, summary: ClusterSummary) -> np.ndarray:
    """Distance of each sample to its cluster median over that cluster's radius."""
    X = validate_matrix(X)
    a = as_assignment(a, X.shape[0])
    if summary.medians.shape != (a.n_clusters + 1, X.shape[1]) or summary.radii.shape != (a.n_clusters,):
        raise InconsistentSummaryError(
            f"summary for {summary.n_clusters} clusters of width {summary.medians.shape[1]} "
            f"does not match {a.n_clusters} clusters of width {X.shape[1]}")
    return _normalized(X, a.labels, summary.medians, summary.radii)


def _normalized(X, labels, medians, radii):
    d = row_distances(X, medians[labels]) / radii[labels]
    # the radius is the max of these same distances, so only rounding can push past 1
    return np.minimum(d, 1.0)


def median_gap_matrix(summary: ClusterSummary) -> np.ndarray:
    """Distances among cluster medians and the global median, scaled by their maximum."""
    return _gamma(summary.medians)


def _gamma(medians):
    G = np.sqrt(pairwise_sq_dist_to_rows(medians, medians))
    np.fill_diagonal(G, 0.0)
    top = G.max()
    if top == 0:
        return np.zeros_like(G)
    G /= top
    # exact symmetry regardless of rounding in the kernel
    return np.maximum(G, G.T)


def _prepare(X, Xp, a):
    X = validate_matrix(X, "X")
    Xp = validate_matrix(Xp, "X_embedded")
    check_same_rows(X, Xp)
    return X, Xp, as_assignment(a, X.shape[0])


def _local(X, Xp, a, parts=None):
    (m, r), (mp, rp) = parts or (_summarize(X, a), _summarize(Xp, a))
    d = _normalized(X, a.labels, m, r)
    dp = _normalized(Xp, a.labels, mp, rp)
    return 1.0 - np.linalg.norm(d - dp) / np.sqrt(X.shape[0])


def _global(X, Xp, a, parts=None):
    (m, _), (mp, _) = parts or (_summarize(X, a), _summarize(Xp, a))
    c = a.n_clusters
    return 1.0 - np.linalg.norm(_gamma(m) - _gamma(mp)) / np.sqrt(c * (c + 1))


def _clamp(v):
    return float(min(1.0, max(0.0, v)))


def cmet_local(X, Xp, a) -> float:
    """Local shape-preservation score of ``Xp`` against ``X`` under assignment ``a``."""
    return _clamp(_local(*_prepare(X, Xp, a)))


def cmet_global(X, Xp, a) -> float:
    """Global shape-preservation score of ``Xp`` against ``X`` under assignment ``a``."""
    return _clamp(_global(*_prepare(X, Xp, a)))


def _score(X, Xp, a, mode):
    parts = (_summarize(X, a), _summarize(Xp, a))
    local = _local(X, Xp, a, parts)
    glob = _global(X, Xp, a, parts)
    return CmetScore(
        local=_clamp(local), global_=_clamp(glob), mode=mode, n_clusters=a.n_clusters,
        n=X.shape[0], p=X.shape[1], q=Xp.shape[1],
        local_raw=float(local), global_raw=float(glob),
    )


def cmet_score(X, Xp, labels=None, n_clusters=None, linkage="ward",
               max_samples=DEFAULT_MAX_SAMPLES) -> CmetScore:
    """Score an embedding in supervised or unsupervised mode.

    Pass ``labels`` to use classes as clusters. Otherwise pass ``n_clusters``:
    ``X`` (never ``Xp``) is clustered agglomeratively and the same partition
    is reused in the embedding.
    """
    if (labels is None) == (n_clusters is None):
        raise InputError("give exactly one of labels or n_clusters")
    X = validate_matrix(X, "X")
    Xp = validate_matrix(Xp, "X_embedded")
    check_same_rows(X, Xp)
    if labels is not None:
        return _score(X, Xp, as_assignment(labels, X.shape[0]), SUPERVISED)
    a = cut(agglomerate(X, linkage, max_samples), n_clusters)
    return _score(X, Xp, a, UNSUPERVISED)


class CMET(BaseEstimator):
    """Fit on the original data, then score any number of embeddings of it.

    ``fit(X, y)`` with labels runs in supervised mode; ``fit(X)`` clusters
    ``X`` into ``n_clusters`` groups. The dendrogram is kept, so
    :meth:`sweep` can re-cut it at other cluster counts without reclustering.

    Parameters
    ----------
    n_clusters : int, default=None
        Required for unsupervised fitting.
    linkage : str, default="ward"
    max_samples : int, default=20000
        Clustering size cap.
    """

    def __init__(self, n_clusters=None, linkage="ward", max_samples=DEFAULT_MAX_SAMPLES):
        self.n_clusters = n_clusters
        self.linkage = linkage
        self.max_samples = max_samples

    def fit(self, X, y=None):
        X = validate_matrix(X)
        self.X_ = X
        self.dendrogram_ = None
        if y is not None:
            self.assignment_ = as_assignment(y, X.shape[0])
            self.mode_ = SUPERVISED
        else:
            if self.n_clusters is None:
                raise InputError("n_clusters is required when no labels are given")
            self.dendrogram_ = agglomerate(X, self.linkage, self.max_samples)
            self.assignment_ = cut(self.dendrogram_, self.n_clusters)
            self.mode_ = UNSUPERVISED
        self.summary_ = cluster_summary(X, self.assignment_)
        self.labels_ = np.asarray(self.assignment_.labels)
        return self

    def evaluate(self, X_embedded) -> CmetScore:
        Xp = validate_matrix(X_embedded, "X_embedded")
        check_same_rows(self.X_, Xp)
        return _score(self.X_, Xp, self.assignment_, self.mode_)

    def score(self, X_embedded, y=None) -> float:
        """Mean of the local and global scores, for sklearn-style model selection."""
        s = self.evaluate(X_embedded)
        return 0.5 * (s.local + s.global_)

    def sweep(self, X_embedded, cluster_counts):
        """Unsupervised scores at several cluster counts from the fitted dendrogram."""
        if self.dendrogram_ is None:
            self.dendrogram_ = agglomerate(self.X_, self.linkage, self.max_samples)
        Xp = validate_matrix(X_embedded, "X_embedded")
        check_same_rows(self.X_, Xp)
        return [_score(self.X_, Xp, cut(self.dendrogram_, c), UNSUPERVISED) for c in cluster_counts]
