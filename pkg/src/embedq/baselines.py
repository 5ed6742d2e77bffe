"""Rank-based embedding quality metrics: trustworthiness, continuity and LCMC.

Standard literature definitions, with ``r(i, j)`` the rank of ``j`` among the
neighbours of ``i`` (1 = nearest, ties to the smaller index)::

    T(k) = 1 - 2 / (n k (2n - 3k - 1)) * sum_i sum_{j in U_k(i)} (r_orig(i, j) - k)
    C(k) = same with the two spaces swapped
    LCMC(k) = 1 / (n k) * sum_i |N_k^orig(i) & N_k^emb(i)| - k / (n - 1)

``U_k(i)`` holds the embedded k-neighbours of ``i`` that are not original
k-neighbours. All of these need the full n x n rank matrices, so inputs above
``max_samples`` are refused with :class:`TooLargeForRankMetricsError`.
"""
from __future__ import annotations

import numpy as np

from .core import check_same_rows, pairwise_sq_dist_to_rows, validate_matrix
from .exceptions import InvalidNeighborhoodSizeError, TooFewSamplesError, TooLargeForRankMetricsError

DEFAULT_MAX_SAMPLES = 15_000
_BLOCK_ROWS_ELEMENTS = 1 << 22


def default_k(n):
    return max(1, int(0.01 * n))


def _check_size(n, max_samples):
    if n < 2:
        raise TooFewSamplesError("rank metrics need at least 2 samples")
    if max_samples is not None and n > max_samples:
        raise TooLargeForRankMetricsError(
            f"{n} samples exceeds the rank-metric cap of {max_samples} "
            f"(the two n x n rank matrices would need {8 * n * n / 2**30:.1f} GiB)",
            n=n, cap=max_samples)


def rank_matrix(X, max_samples=DEFAULT_MAX_SAMPLES) -> np.ndarray:
    """Neighbour ranks: ``R[i, j]`` is the position of ``j`` in the distance-sorted
    list of points other than ``i`` (1-based, ties to the smaller index); ``R[i, i] = 0``.
    """
    X = validate_matrix(X)
    n = X.shape[0]
    _check_size(n, max_samples)
    R = np.empty((n, n), dtype=np.int32)
    positions = np.arange(n, dtype=np.int32)[None, :]
    block = max(1, _BLOCK_ROWS_ELEMENTS // n)
    for start in range(0, n, block):
        stop = min(n, start + block)
        D = pairwise_sq_dist_to_rows(X[start:stop], X)
        # self sorts first even against exact duplicates
        D[np.arange(stop - start), np.arange(start, stop)] = -1.0
        order = np.argsort(D, axis=1, kind="stable")
        np.put_along_axis(R[start:stop], order, positions, axis=1)
    return R


def coranking_from_ranks(R, Rp) -> np.ndarray:
    n = R.shape[0]
    off = ~np.eye(n, dtype=bool)
    flat = (R[off].astype(np.int64) - 1) * (n - 1) + (Rp[off] - 1)
    return np.bincount(flat, minlength=(n - 1) ** 2).reshape(n - 1, n - 1)


def coranking(X, Xp, max_samples=DEFAULT_MAX_SAMPLES) -> np.ndarray:
    """Co-ranking matrix ``Q[k, l]``: pairs with original rank k+1 and embedded rank l+1."""
    X = validate_matrix(X, "X")
    Xp = validate_matrix(Xp, "X_embedded")
    check_same_rows(X, Xp)
    _check_size(X.shape[0], max_samples)
    return coranking_from_ranks(rank_matrix(X, max_samples), rank_matrix(Xp, max_samples))


def _check_k(k, n, strict_half):
    if strict_half:
        if not (1 <= k and 2 * k < n):
            raise InvalidNeighborhoodSizeError(f"k must satisfy 1 <= k < n/2 = {n / 2}, got {k}")
    elif not 1 <= k <= n - 1:
        raise InvalidNeighborhoodSizeError(f"k must be in 1..{n - 1}, got {k}")


def _tc_scale(n, k):
    return 2.0 / (n * k * (2 * n - 3 * k - 1))


# co-ranking route -----------------------------------------------------------

def trustworthiness_from_coranking(Q, k):
    n = Q.shape[0] + 1
    _check_k(k, n, True)
    ranks = np.arange(1, n)
    # original rank > k but embedded rank <= k
    penalty = (Q[k:, :k].sum(axis=1) * (ranks[k:] - k)).sum()
    return 1.0 - _tc_scale(n, k) * penalty


def continuity_from_coranking(Q, k):
    n = Q.shape[0] + 1
    _check_k(k, n, True)
    ranks = np.arange(1, n)
    penalty = (Q[:k, k:].sum(axis=0) * (ranks[k:] - k)).sum()
    return 1.0 - _tc_scale(n, k) * penalty


def lcmc_from_coranking(Q, k):
    n = Q.shape[0] + 1
    _check_k(k, n, False)
    return Q[:k, :k].sum() / (n * k) - k / (n - 1)


# direct route ------------------------------------------------------------------

def _intrusion_penalty(R_from, R_to, k):
    # neighbours of i in R_to's space that were not neighbours in R_from's space
    mask = (R_to >= 1) & (R_to <= k) & (R_from > k)
    return (R_from[mask] - k).sum()


def _ranks(X, Xp, max_samples):
    X = validate_matrix(X, "X")
    Xp = validate_matrix(Xp, "X_embedded")
    check_same_rows(X, Xp)
    _check_size(X.shape[0], max_samples)
    return rank_matrix(X, max_samples), rank_matrix(Xp, max_samples)


def trustworthiness(X, Xp, k, max_samples=DEFAULT_MAX_SAMPLES) -> float:
    """Penalises points that enter a k-neighbourhood only in the embedding."""
    n = np.shape(X)[0]
    _check_k(k, n, True)
    R, Rp = _ranks(X, Xp, max_samples)
    return float(1.0 - _tc_scale(n, k) * _intrusion_penalty(R, Rp, k))


def continuity(X, Xp, k, max_samples=DEFAULT_MAX_SAMPLES) -> float:
    """Penalises original k-neighbours that leave the neighbourhood in the embedding."""
    n = np.shape(X)[0]
    _check_k(k, n, True)
    R, Rp = _ranks(X, Xp, max_samples)
    return float(1.0 - _tc_scale(n, k) * _intrusion_penalty(Rp, R, k))


def lcmc(X, Xp, k, max_samples=DEFAULT_MAX_SAMPLES) -> float:
    """Mean k-neighbourhood overlap minus its chance level ``k / (n - 1)``."""
    n = np.shape(X)[0]
    _check_k(k, n, False)
    R, Rp = _ranks(X, Xp, max_samples)
    overlap = np.count_nonzero((R >= 1) & (R <= k) & (Rp >= 1) & (Rp <= k))
    return float(overlap / (n * k) - k / (n - 1))


def rank_metrics(X, Xp, k, metrics=("trustworthiness", "continuity", "lcmc"),
                 max_samples=DEFAULT_MAX_SAMPLES):
    """Several metrics from one co-ranking matrix."""
    Q = coranking(X, Xp, max_samples)
    fns = {
        "trustworthiness": trustworthiness_from_coranking,
        "continuity": continuity_from_coranking,
        "lcmc": lcmc_from_coranking,
    }
    return {m: float(fns[m](Q, k)) for m in metrics}
