import numpy as np
import numpy.testing as npt
import pytest

from stratembed.errors import ShapeMismatchError
from stratembed.nn import DenseLayer
from stratembed.rng import Rng


def test_identity_weights_linear_is_identity():
    layer = DenseLayer(np.eye(3), np.zeros(3), "linear")
    x = np.array([[1.0, -2.0, 3.0], [0.5, 0.0, -1.0]])
    out, _ = layer.forward(x)
    npt.assert_array_equal(out, x)


def test_relu_clips_negative_preactivations():
    layer = DenseLayer(np.eye(2), np.zeros(2), "relu")
    out, cache = layer.forward(np.array([[-1.0, 2.0]]))
    npt.assert_array_equal(out, [[0.0, 2.0]])
    npt.assert_array_equal(cache, [[-1.0, 2.0]])


def test_affine_hand_example():
    # [1, 1] @ [[1], [1]] + 0.5 = 2.5
    layer = DenseLayer(np.array([[1.0], [1.0]]), np.array([0.5]), "linear")
    out, _ = layer.forward(np.array([[1.0, 1.0]]))
    npt.assert_allclose(out, [[2.5]])


def test_softmax_rows_sum_to_one():
    rng = Rng(3)
    layer = DenseLayer.initialize(5, 4, "softmax", rng)
    x = rng.normal(size=(20, 5)) * 10.0
    out, _ = layer.forward(x)
    npt.assert_allclose(out.sum(axis=1), np.ones(20), atol=1e-9)
    assert (out > 0).all()


def test_softmax_stable_for_large_logits():
    layer = DenseLayer(np.eye(2) * 500.0, np.zeros(2), "softmax")
    out, _ = layer.forward(np.array([[2.0, 1.0]]))
    assert np.isfinite(out).all()
    npt.assert_allclose(out.sum(axis=1), [1.0])


def test_relu_output_nonnegative():
    rng = Rng(11)
    layer = DenseLayer.initialize(6, 7, "relu", rng)
    out, _ = layer.forward(rng.normal(size=(30, 6)))
    assert (out >= 0).all()


def test_dimension_mismatch_names_both_shapes():
    layer = DenseLayer(np.zeros((3, 2)), np.zeros(2), "linear")
    with pytest.raises(ShapeMismatchError, match=r"\(4, 4\).*3 columns"):
        layer.forward(np.zeros((4, 4)))


def test_backward_zero_grad_output_gives_zero_grads():
    rng = Rng(0)
    layer = DenseLayer.initialize(4, 3, "relu", rng)
    x = rng.normal(size=(5, 4))
    _, cache = layer.forward(x)
    gi, gw, gb = layer.backward(np.zeros((5, 3)), cache, x)
    assert not gi.any() and not gw.any() and not gb.any()


def test_backward_linear_single_sample_weight_grad():
    layer = DenseLayer(np.zeros((3, 2)), np.zeros(2), "linear")
    x = np.array([[1.0, 2.0, -1.0]])
    _, cache = layer.forward(x)
    grad_out = np.array([[0.5, -0.25]])
    _, gw, gb = layer.backward(grad_out, cache, x)
    npt.assert_allclose(gw, x.T @ grad_out)
    npt.assert_allclose(gb, grad_out[0])


def test_he_initialization_seed_determinism():
    a = DenseLayer.initialize(10, 6, "relu", Rng(42))
    b = DenseLayer.initialize(10, 6, "relu", Rng(42))
    npt.assert_array_equal(a.weights, b.weights)
    assert abs(a.weights).max() <= np.sqrt(6.0 / 10)
    assert not a.bias.any()


def test_row_independence_of_dense_layers():
    # BLAS picks different kernels for gemv vs gemm, so agreement is to the ulp
    rng = Rng(5)
    layer = DenseLayer.initialize(4, 3, "relu", rng)
    batch = rng.normal(size=(8, 4))
    full, _ = layer.forward(batch)
    for i in range(8):
        row, _ = layer.forward(batch[i : i + 1])
        npt.assert_allclose(row[0], full[i], rtol=1e-12, atol=1e-15)
