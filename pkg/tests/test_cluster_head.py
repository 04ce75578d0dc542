import numpy as np
import numpy.testing as npt
import pytest

from stratembed.errors import DomainError
from stratembed.model.cluster import (
    ClusterHead,
    soft_assign,
    soft_assign_backward,
    target_distribution,
)
from stratembed.nn import loss_and_grad
from stratembed.rng import Rng


def test_equidistant_point_splits_evenly():
    head = ClusterHead(np.array([[1.0, 0.0], [-1.0, 0.0]]))
    q = soft_assign(np.array([[0.0, 5.0]]), head)
    npt.assert_allclose(q, [[0.5, 0.5]])


def test_alpha_one_hand_value():
    # z = mu1 = origin, mu2 = (2, 0): weights 1 and 1/5 -> q = [5/6, 1/6]
    head = ClusterHead(np.array([[0.0, 0.0], [2.0, 0.0]]), alpha=1.0)
    q = soft_assign(np.array([[0.0, 0.0]]), head)
    npt.assert_allclose(q, [[5.0 / 6.0, 1.0 / 6.0]], rtol=1e-12)


def test_rows_sum_to_one_random():
    rng = Rng(1)
    head = ClusterHead(rng.normal(size=(5, 3)))
    q = soft_assign(rng.normal(size=(200, 3)), head)
    npt.assert_allclose(q.sum(axis=1), np.ones(200), atol=1e-9)
    assert (q > 0).all()


def test_fewer_than_two_centroids_rejected():
    with pytest.raises(DomainError):
        ClusterHead(np.zeros((1, 3)))


def test_target_distribution_uniform_fixed_point():
    q = np.full((6, 3), 1.0 / 3.0)
    npt.assert_allclose(target_distribution(q), q, atol=1e-12)


def test_target_distribution_single_row_hand_value():
    # single row: f_j = q_j so p_j = q_j^2 / q_j normalized = q_j
    q = np.array([[0.9, 0.1]])
    npt.assert_allclose(target_distribution(q), [[0.9, 0.1]], rtol=1e-12)


def test_target_distribution_matches_direct_formula():
    rng = Rng(2)
    q = rng.uniform(0.01, 1.0, size=(40, 4))
    q /= q.sum(axis=1, keepdims=True)
    p = target_distribution(q)
    f = q.sum(axis=0)
    w = q**2 / f
    npt.assert_allclose(p, w / w.sum(axis=1, keepdims=True), rtol=1e-12)
    npt.assert_allclose(p.sum(axis=1), np.ones(40), atol=1e-9)


def test_target_distribution_sharpens_confident_assignments():
    rng = Rng(3)
    k = 4
    q = rng.uniform(0.01, 1.0, size=(60, k))
    q /= q.sum(axis=1, keepdims=True)
    p = target_distribution(q)
    # averaged over rows, mass above 1/k grows and mass below shrinks
    conf = q > 1.0 / k
    assert (p[conf] - q[conf]).mean() > 0
    assert (p[~conf] - q[~conf]).mean() < 0


def test_empty_soft_cluster_rejected():
    q = np.array([[1.0, 0.0], [1.0, 0.0]])
    with pytest.raises(DomainError, match="empty soft cluster"):
        target_distribution(q)


@pytest.mark.parametrize("alpha", [1.0, 2.5])
def test_soft_assign_backward_matches_finite_differences(alpha):
    rng = Rng(4)
    z = rng.normal(size=(6, 3))
    mu = rng.normal(size=(4, 3))
    head = ClusterHead(mu.copy(), alpha=alpha)
    p = rng.uniform(0.1, 1.0, size=(6, 4))
    p /= p.sum(axis=1, keepdims=True)

    def loss_of(z_val, mu_val):
        q = soft_assign(z_val, ClusterHead(mu_val, alpha=alpha))
        return loss_and_grad("kl_divergence", q, p)[0]

    q = soft_assign(z, head)
    _, grad_q = loss_and_grad("kl_divergence", q, p)
    grad_z, grad_mu = soft_assign_backward(z, head, grad_q)

    h = 1e-6
    for arr, grad in ((z, grad_z), (mu, grad_mu)):
        flat = arr.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            lp = loss_of(z, mu)
            flat[i] = orig - h
            lm = loss_of(z, mu)
            flat[i] = orig
            numeric = (lp - lm) / (2 * h)
            rel = abs(grad.reshape(-1)[i] - numeric) / max(abs(numeric) + abs(grad.reshape(-1)[i]), 1e-6)
            assert rel < 1e-4
