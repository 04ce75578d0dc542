"""Subgroup discovery and statistics on the embedded space."""

from stratembed.analysis.clusters import ClusterAssignment
from stratembed.analysis.enrichment import (
    EnrichmentRecord,
    HierarchicalEnrichmentReport,
    enrich_pairwise,
    hierarchical_enrichment,
)
from stratembed.analysis.fisher import ContingencyTable, fisher_exact
from stratembed.analysis.hierarchy import LinkageTree, agglomerative_ward, cut_tree
from stratembed.analysis.kmeans import kmeans
from stratembed.analysis.pca import pca

__all__ = [
    "ClusterAssignment",
    "ContingencyTable",
    "EnrichmentRecord",
    "HierarchicalEnrichmentReport",
    "LinkageTree",
    "agglomerative_ward",
    "cut_tree",
    "enrich_pairwise",
    "fisher_exact",
    "hierarchical_enrichment",
    "kmeans",
    "pca",
]
