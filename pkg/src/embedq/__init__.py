"""Embedding quality scores guided by clusters, plus rank-based baselines."""
from .baselines import continuity, coranking, lcmc, rank_matrix, trustworthiness
from .clustering import AgglomerativeClustering, Dendrogram, agglomerate, cut
from .cmet import CMET, CmetScore, cmet_global, cmet_local, cmet_score, median_gap_matrix, normalized_distances
from .core import (
    ClusterAssignment,
    ClusterSummary,
    cluster_summary,
    coordinatewise_median,
    pairwise_sq_dist_to_rows,
    validate_matrix,
)
from .datagen import LabeledDataset, gen_rings, gen_swiss_roll, lift_2_9, load_point_cloud
from .dr_fixtures import PCA, RandomProjection, fit_pca, shuffle_embedding

__version__ = "0.1.0"
