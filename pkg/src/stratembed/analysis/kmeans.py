"""Lloyd's algorithm with k-means++ seeding.

Deterministic under a seeded Rng: ++ sampling consumes the stream in a fixed
order, distance ties resolve to the lowest centroid index and empty clusters
are re-seeded to the farthest point from its assigned centroid.
"""

import numpy as np

from stratembed import backends
from stratembed.analysis.clusters import ClusterAssignment
from stratembed.errors import DomainError
from stratembed.nn.layers import as_matrix
from stratembed.rng import Rng


def _plus_plus_seeds(points: np.ndarray, k: int, rng: Rng) -> np.ndarray:
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    idx = int(rng.integers(0, n))
    centroids[0] = points[idx]
    closest = backends.pairwise_sqdist(points, centroids[:1]).ravel()
    for j in range(1, k):
        total = closest.sum()
        if total > 0.0:
            pick = rng.choice_index(np.cumsum(closest))
        else:  # remaining mass all at distance zero (duplicate points)
            pick = int(rng.integers(0, n))
        centroids[j] = points[pick]
        d_new = backends.pairwise_sqdist(points, centroids[j : j + 1]).ravel()
        np.minimum(closest, d_new, out=closest)
    return centroids


def _fill_empty_clusters(points, centroids, labels, k):
    """Move the farthest point of a multi-member cluster into each empty one."""
    counts = np.bincount(labels, minlength=k)
    while (counts == 0).any():
        j = int(np.flatnonzero(counts == 0)[0])
        dist_own = ((points - centroids[labels]) ** 2).sum(axis=1)
        dist_own[counts[labels] < 2] = -np.inf  # donors must keep one member
        far = int(np.argmax(dist_own))
        counts[labels[far]] -= 1
        labels[far] = j
        counts[j] += 1
        centroids[j] = points[far]


def inertia(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    return float(((points - centroids[labels]) ** 2).sum())


def _lloyd(points, centroids, k, max_iter):
    prev = None
    for _ in range(max_iter):
        labels = np.argmin(backends.pairwise_sqdist(points, centroids), axis=1)
        _fill_empty_clusters(points, centroids, labels, k)
        for j in range(k):
            centroids[j] = points[labels == j].mean(axis=0)
        if prev is not None and np.array_equal(labels, prev):
            break
        prev = labels
    return centroids, labels


def kmeans(points, k: int, rng: Rng, max_iter: int = 300, n_init: int = 10):
    """Cluster rows of ``points`` into k groups.

    Runs ``n_init`` seeded restarts and keeps the lowest-inertia local
    optimum (first one on exact ties). Returns ``(centroids,
    ClusterAssignment)``; raises when k exceeds the number of samples.
    """
    points = as_matrix(points)
    n = points.shape[0]
    if k > n:
        raise DomainError(f"k={k} exceeds n_samples={n}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")

    best = None
    for _ in range(max(1, n_init)):
        centroids = _plus_plus_seeds(points, k, rng)
        centroids, labels = _lloyd(points, centroids, k, max_iter)
        score = inertia(points, centroids, labels)
        if best is None or score < best[0]:
            best = (score, centroids, labels)
    _, centroids, labels = best
    return centroids, ClusterAssignment(labels.astype(np.int64), k)
