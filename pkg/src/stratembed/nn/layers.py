"""Fully connected layers with relu / linear / softmax activations.

Data matrices are float64 numpy arrays, rows = samples, columns = units.
Matrix products run on numpy's BLAS in every backend. Public operations
guarantee finite outputs and raise :class:`NonFiniteError` otherwise.
"""

import numpy as np

from stratembed.errors import NonFiniteError, ShapeMismatchError
from stratembed.rng import Rng

ACTIVATIONS = ("relu", "linear", "softmax")


def as_matrix(x) -> np.ndarray:
    """Coerce to a 2-d float64 C-order array."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr


def check_finite(arr: np.ndarray, what: str) -> np.ndarray:
    if not np.isfinite(arr).all():
        raise NonFiniteError(f"non-finite values in {what}")
    return arr


def softmax(pre: np.ndarray) -> np.ndarray:
    """Row-wise softmax, stabilized by subtracting the per-row maximum."""
    shifted = pre - pre.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class DenseLayer:
    """Affine map plus a fixed activation.

    ``weights`` has shape (in_dim, out_dim), ``bias`` shape (out_dim,).
    ``trainable=False`` layers are skipped by the optimizer wiring; see the
    transfer-learning phase where the first layer is frozen.
    """

    def __init__(self, weights, bias, activation: str, trainable: bool = True):
        self.weights = np.ascontiguousarray(weights, dtype=np.float64)
        self.bias = np.ascontiguousarray(bias, dtype=np.float64)
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}, expected one of {ACTIVATIONS}")
        if self.weights.ndim != 2 or self.bias.ndim != 1:
            raise ShapeMismatchError(
                f"weights must be 2-d and bias 1-d, got {self.weights.shape} / {self.bias.shape}"
            )
        if self.weights.shape[1] != self.bias.shape[0]:
            raise ShapeMismatchError(
                f"weights shape {self.weights.shape} inconsistent with bias shape {self.bias.shape}"
            )
        self.activation = activation
        self.trainable = bool(trainable)

    @classmethod
    def initialize(cls, in_dim: int, out_dim: int, activation: str, rng: Rng,
                   trainable: bool = True) -> "DenseLayer":
        """He-style uniform fan-in initialization, zero bias."""
        limit = np.sqrt(6.0 / in_dim)
        w = rng.uniform(-limit, limit, size=(in_dim, out_dim))
        return cls(w, np.zeros(out_dim), activation, trainable)

    @property
    def in_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[1]

    def forward(self, x: np.ndarray):
        """Return (output, cache); cache is the pre-activation matrix."""
        x = as_matrix(x)
        if x.shape[1] != self.in_dim:
            raise ShapeMismatchError(
                f"input has shape {x.shape} but layer expects {self.in_dim} columns "
                f"(weights {self.weights.shape})"
            )
        pre = x @ self.weights + self.bias
        if self.activation == "relu":
            out = np.maximum(pre, 0.0)
        elif self.activation == "softmax":
            out = softmax(pre)
        else:
            out = pre
        return check_finite(out, "dense forward output"), pre

    def backward(self, grad_output: np.ndarray, cache: np.ndarray, x: np.ndarray):
        """Chain-rule gradients given d(loss)/d(output).

        Returns (grad_input, grad_weights, grad_bias). ``cache`` must be the
        pre-activation returned by the forward pass on ``x``.
        """
        grad_output = as_matrix(grad_output)
        x = as_matrix(x)
        if grad_output.shape != cache.shape:
            raise ShapeMismatchError(
                f"grad_output shape {grad_output.shape} does not match cache shape {cache.shape}"
            )
        if x.shape != (cache.shape[0], self.in_dim):
            raise ShapeMismatchError(
                f"input shape {x.shape} inconsistent with cache {cache.shape} and "
                f"weights {self.weights.shape}"
            )
        if self.activation == "relu":
            grad_pre = grad_output * (cache > 0.0)
        elif self.activation == "softmax":
            y = softmax(cache)
            inner = (grad_output * y).sum(axis=1, keepdims=True)
            grad_pre = y * (grad_output - inner)
        else:
            grad_pre = grad_output
        grad_weights = x.T @ grad_pre
        grad_bias = grad_pre.sum(axis=0)
        grad_input = grad_pre @ self.weights.T
        return grad_input, grad_weights, grad_bias

    def copy(self) -> "DenseLayer":
        return DenseLayer(self.weights.copy(), self.bias.copy(), self.activation, self.trainable)
