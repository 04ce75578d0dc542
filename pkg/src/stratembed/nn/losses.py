"""Scalar losses and their gradients w.r.t. the prediction matrix.

Conventions: mse / mae / bce average over every matrix entry; kl_divergence
treats each row as a probability distribution and averages the per-row
KL(target || prediction) over rows, with the target held constant during
backpropagation (the clustering optimization scheme). Probabilities are
clamped at 1e-12 before logs and divisions.
"""

import numpy as np

from stratembed.errors import DomainError, require_shape
from stratembed.nn.layers import as_matrix, check_finite

LOSS_KINDS = ("mse", "mae", "bce", "kl_divergence")

PROB_CLAMP = 1e-12
BCE_RANGE_TOL = 1e-9
ROW_SUM_TOL = 1e-6


def loss_and_grad(kind: str, prediction, target):
    """Mean loss and d(loss)/d(prediction) for the given loss kind."""
    if kind not in LOSS_KINDS:
        raise ValueError(f"unknown loss {kind!r}, expected one of {LOSS_KINDS}")
    pred = as_matrix(prediction)
    tgt = as_matrix(target)
    require_shape("prediction", pred.shape, "target", tgt.shape)
    n_total = pred.size
    n_rows = pred.shape[0]

    if kind == "mse":
        diff = pred - tgt
        loss = float(np.mean(diff * diff))
        grad = (2.0 / n_total) * diff
    elif kind == "mae":
        diff = pred - tgt
        loss = float(np.mean(np.abs(diff)))
        grad = np.sign(diff) / n_total
    elif kind == "bce":
        if not np.isin(tgt, (0.0, 1.0)).all():
            raise DomainError("bce targets must be exactly 0 or 1")
        if pred.min() < -BCE_RANGE_TOL or pred.max() > 1.0 + BCE_RANGE_TOL:
            raise DomainError(
                f"bce predictions outside (0, 1): range [{pred.min()}, {pred.max()}]"
            )
        p = np.clip(pred, PROB_CLAMP, 1.0 - PROB_CLAMP)
        loss = float(-np.mean(tgt * np.log(p) + (1.0 - tgt) * np.log(1.0 - p)))
        grad = (p - tgt) / (p * (1.0 - p)) / n_total
    else:  # kl_divergence
        _check_rows_normalized("target", tgt)
        _check_rows_normalized("prediction", pred)
        t = np.clip(tgt, 0.0, None)
        q = np.clip(pred, PROB_CLAMP, None)
        terms = np.where(t > 0.0, t * (np.log(np.clip(t, PROB_CLAMP, None)) - np.log(q)), 0.0)
        loss = float(terms.sum() / n_rows)
        grad = np.where(t > 0.0, -t / q, 0.0) / n_rows

    check_finite(np.asarray(loss), f"{kind} loss")
    return loss, check_finite(grad, f"{kind} gradient")


def _check_rows_normalized(name: str, arr: np.ndarray):
    if arr.min() < -ROW_SUM_TOL:
        raise DomainError(f"{name} rows must be non-negative to form distributions")
    sums = arr.sum(axis=1)
    worst = float(np.abs(sums - 1.0).max())
    if worst > ROW_SUM_TOL:
        raise DomainError(f"{name} rows must sum to 1 (max deviation {worst:.3g})")
