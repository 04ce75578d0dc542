"""Soft cluster assignments over learned centroids.

The similarity kernel is a Student's t distribution on squared embedding
distance, normalized per sample; the sharpened target distribution squares
the assignments and renormalizes by soft cluster frequency. Both gradients
flow through the assignment only (the target is treated as constant).
"""

from dataclasses import dataclass

import numpy as np

from stratembed import backends
from stratembed.errors import DomainError, ShapeMismatchError
from stratembed.nn.layers import as_matrix, check_finite


@dataclass
class ClusterHead:
    """k centroids in the embedded space plus the t-kernel degrees of freedom."""

    centroids: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        self.centroids = np.ascontiguousarray(self.centroids, dtype=np.float64)
        if self.centroids.ndim != 2 or self.centroids.shape[0] < 2:
            raise DomainError(
                f"need at least 2 centroids in a 2-d array, got shape {self.centroids.shape}"
            )
        if not np.isfinite(self.centroids).all():
            raise DomainError("centroids must be finite")
        if self.alpha <= 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]

    def copy(self) -> "ClusterHead":
        return ClusterHead(self.centroids.copy(), self.alpha)


def soft_assign(embedding, head: ClusterHead) -> np.ndarray:
    """Row-normalized t-kernel similarities; rows are probability vectors."""
    z = as_matrix(embedding)
    if z.shape[1] != head.dim:
        raise ShapeMismatchError(
            f"embedding has {z.shape[1]} columns but centroids have {head.dim}"
        )
    q = backends.soft_assign(z, head.centroids, head.alpha)
    return check_finite(q, "soft assignment")


def soft_assign_backward(embedding, head: ClusterHead, grad_q):
    """Gradients of a scalar loss through the soft assignment.

    Given d(loss)/dQ, returns (d(loss)/d(embedding), d(loss)/d(centroids)).
    """
    z = as_matrix(embedding)
    mu = head.centroids
    alpha = head.alpha
    g = as_matrix(grad_q)
    d = backends.pairwise_sqdist(z, mu)
    t = 1.0 + d / alpha
    w = t ** (-(alpha + 1.0) / 2.0)
    s = w.sum(axis=1, keepdims=True)
    q = w / s
    inner = (g * q).sum(axis=1, keepdims=True)
    coef = ((g - inner) / s) * (-(alpha + 1.0) / (2.0 * alpha)) * w / t
    diff = z[:, None, :] - mu[None, :, :]
    grad_z = 2.0 * np.einsum("nk,nkd->nd", coef, diff)
    grad_mu = -2.0 * np.einsum("nk,nkd->kd", coef, diff)
    return grad_z, grad_mu


def target_distribution(q) -> np.ndarray:
    """Sharpened targets: squared assignments normalized by soft frequency."""
    q = as_matrix(q)
    _check_rows(q)
    f = q.sum(axis=0)
    if (f <= 0.0).any():
        empty = np.flatnonzero(f <= 0.0).tolist()
        raise DomainError(f"empty soft clusters {empty}: cannot form target distribution")
    w = q * q / f
    return w / w.sum(axis=1, keepdims=True)


def _check_rows(q, tol=1e-6):
    if q.min() < -tol:
        raise DomainError("assignments must be non-negative")
    dev = np.abs(q.sum(axis=1) - 1.0).max()
    if dev > tol:
        raise DomainError(f"assignment rows must sum to 1 (max deviation {dev:.3g})")
