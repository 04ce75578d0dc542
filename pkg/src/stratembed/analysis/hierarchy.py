"""Agglomerative clustering with the Ward criterion.

Merge distances are increases in total within-cluster sum of squares, so the
sequence is non-decreasing (Ward admits no inversions). Node ids follow the
linkage convention: leaves 0..n-1, merge t creates node n+t.
"""

from dataclasses import dataclass

import numpy as np

from stratembed import backends
from stratembed.analysis.clusters import ClusterAssignment
from stratembed.errors import DomainError
from stratembed.nn.layers import as_matrix

_MONOTONE_SLACK = 1e-9


@dataclass
class LinkageTree:
    """Merge sequence (left_id, right_id, ward_distance, new_id) plus leaf count."""

    merges: list
    leaf_count: int

    def __post_init__(self):
        if len(self.merges) != self.leaf_count - 1:
            raise DomainError(
                f"{self.leaf_count} leaves require {self.leaf_count - 1} merges, "
                f"got {len(self.merges)}"
            )
        seen_children = set()
        prev = -np.inf
        for step, (left, right, dist, new_id) in enumerate(self.merges):
            if left >= right:
                raise DomainError(f"merge {step}: left id must be < right id")
            if new_id != self.leaf_count + step:
                raise DomainError(f"merge {step}: new id must be {self.leaf_count + step}")
            if left in seen_children or right in seen_children:
                raise DomainError(f"merge {step}: child id reused")
            seen_children.update((left, right))
            if dist < prev - _MONOTONE_SLACK * max(1.0, abs(prev)):
                raise DomainError(f"merge {step}: ward distance decreased ({prev} -> {dist})")
            prev = dist

    @property
    def root_id(self) -> int:
        return self.leaf_count + len(self.merges) - 1

    def children(self) -> dict:
        """Map from internal node id to its (left, right) children."""
        return {new_id: (left, right) for left, right, _, new_id in self.merges}

    def node_members(self) -> dict:
        """Map from every node id to a sorted array of its leaf indices."""
        members = {i: [i] for i in range(self.leaf_count)}
        for left, right, _, new_id in self.merges:
            members[new_id] = members[left] + members[right]
        return {nid: np.array(sorted(idx), dtype=np.int64) for nid, idx in members.items()}


def agglomerative_ward(points) -> LinkageTree:
    """Full Ward merge tree over the rows of ``points``."""
    points = as_matrix(points)
    n = points.shape[0]
    if n < 2:
        raise DomainError(f"need at least 2 points, got {n}")
    merges, dists = backends.ward_linkage(points)
    rows = [
        (int(merges[t, 0]), int(merges[t, 1]), float(dists[t]), int(merges[t, 2]))
        for t in range(n - 1)
    ]
    return LinkageTree(rows, n)


def cut_tree(tree: LinkageTree, k: int) -> ClusterAssignment:
    """Partition obtained by undoing the last k-1 merges.

    Cluster ids are assigned in order of each cluster's smallest leaf index.
    """
    if not 1 <= k <= tree.leaf_count:
        raise DomainError(f"k must be in [1, {tree.leaf_count}], got {k}")
    parent = np.arange(tree.leaf_count + len(tree.merges), dtype=np.int64)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for left, right, _, new_id in tree.merges[: tree.leaf_count - k]:
        parent[find(left)] = new_id
        parent[find(right)] = new_id

    roots = np.array([find(i) for i in range(tree.leaf_count)])
    ids = {}
    labels = np.empty(tree.leaf_count, dtype=np.int64)
    for i, r in enumerate(roots):
        if r not in ids:
            ids[r] = len(ids)
        labels[i] = ids[r]
    return ClusterAssignment(labels, k)
