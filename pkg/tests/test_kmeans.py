import numpy as np
import numpy.testing as npt
import pytest

from oracles import exhaustive_best_two_partition
from stratembed.analysis.kmeans import inertia, kmeans
from stratembed.errors import DomainError
from stratembed.rng import Rng


def two_clumps(rng, n_per=40, sep=6.0, dim=3):
    a = rng.normal(size=(n_per, dim)) + np.r_[sep, np.zeros(dim - 1)]
    b = rng.normal(size=(n_per, dim))
    pts = np.vstack([a, b])
    # an exact partition needs no sample past the midpoint of the clump axis
    assert a[:, 0].min() > sep / 2 and b[:, 0].max() < sep / 2
    return pts


def test_planted_clumps_recovered_exactly():
    rng = Rng(1)
    pts = two_clumps(rng)
    centroids, assign = kmeans(pts, 2, Rng(1))
    labels = assign.labels
    # exact partition up to label swap
    first_half = labels[:40]
    assert len(np.unique(first_half)) == 1
    assert len(np.unique(labels[40:])) == 1
    assert first_half[0] != labels[40]
    mean_a = pts[:40].mean(axis=0)
    mean_b = pts[40:].mean(axis=0)
    got = centroids[[first_half[0], labels[40]]]
    npt.assert_allclose(got[0], mean_a, atol=0.1)
    npt.assert_allclose(got[1], mean_b, atol=0.1)


def test_k_equals_n_gives_zero_inertia():
    rng = Rng(3)
    pts = rng.normal(size=(6, 2))
    centroids, assign = kmeans(pts, 6, Rng(4))
    assert inertia(pts, centroids, assign.labels) == 0.0
    assert sorted(assign.labels.tolist()) == list(range(6))


def test_k_larger_than_n_rejected():
    with pytest.raises(DomainError, match="exceeds"):
        kmeans(np.zeros((3, 2)), 4, Rng(0))


def test_small_instances_match_exhaustive_two_partition():
    misses = 0
    for trial in range(40):
        rng = Rng(100 + trial)
        n = int(rng.integers(4, 9))
        pts = rng.normal(size=(n, 2))
        best, _ = exhaustive_best_two_partition(pts)
        centroids, assign = kmeans(pts, 2, Rng(200 + trial))
        got = inertia(pts, centroids, assign.labels)
        if got > best + 1e-9:
            misses += 1
            assert_lloyd_fixed_point(pts, centroids, assign.labels)
    assert misses <= 2


def assert_lloyd_fixed_point(pts, centroids, labels):
    d = ((pts[:, None, :] - centroids[None]) ** 2).sum(-1)
    npt.assert_array_equal(np.argmin(d, axis=1), labels)
    for j in range(centroids.shape[0]):
        npt.assert_allclose(centroids[j], pts[labels == j].mean(axis=0), atol=1e-12)


def test_inertia_non_increasing_over_iterations():
    rng = Rng(9)
    pts = rng.normal(size=(60, 3))
    prev = np.inf
    for it in range(1, 12):
        centroids, assign = kmeans(pts, 4, Rng(42), max_iter=it)
        cur = inertia(pts, centroids, assign.labels)
        assert cur <= prev + 1e-9
        prev = cur


def test_duplicate_points_still_fill_every_cluster():
    pts = np.zeros((5, 2))
    centroids, assign = kmeans(pts, 3, Rng(7))
    assert assign.k == 3
    assert np.bincount(assign.labels, minlength=3).min() >= 1


def test_seeded_determinism():
    rng = Rng(11)
    pts = rng.normal(size=(50, 3))
    c1, a1 = kmeans(pts, 3, Rng(5))
    c2, a2 = kmeans(pts, 3, Rng(5))
    npt.assert_array_equal(c1, c2)
    npt.assert_array_equal(a1.labels, a2.labels)
