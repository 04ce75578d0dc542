"""Hard cluster assignments shared by k-means and tree cuts."""

from dataclasses import dataclass

import numpy as np

from stratembed.errors import DomainError


@dataclass
class ClusterAssignment:
    """Per-sample cluster ids in [0, k); every cluster must be non-empty."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.labels.ndim != 1:
            raise DomainError("labels must be a 1-d vector")
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        present = np.unique(self.labels)
        if present.min() < 0 or present.max() >= self.k:
            raise DomainError(f"labels outside [0, {self.k})")
        if len(present) != self.k:
            missing = sorted(set(range(self.k)) - set(present.tolist()))
            raise DomainError(f"empty clusters: {missing}")

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)


def relabel_by_first_member(labels: np.ndarray) -> np.ndarray:
    """Renumber cluster ids by order of first appearance (deterministic)."""
    labels = np.asarray(labels)
    mapping = {}
    out = np.empty_like(labels)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out
