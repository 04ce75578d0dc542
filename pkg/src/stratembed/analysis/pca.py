"""Principal component analysis via SVD of the centered data."""

import numpy as np

from stratembed.errors import DomainError
from stratembed.nn.layers import as_matrix


def pca(points, out_dims: int):
    """Project onto the top principal directions.

    Returns ``(projection, components, explained_variance_ratios)`` where
    components has shape (out_dims, n_features). Each component's sign is
    fixed by making its largest-magnitude coordinate positive.
    """
    points = as_matrix(points)
    n, d = points.shape
    if out_dims > d:
        raise DomainError(f"out_dims={out_dims} exceeds feature count {d}")
    if out_dims < 1:
        raise DomainError(f"out_dims must be >= 1, got {out_dims}")
    centered = points - points.mean(axis=0)
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:out_dims]
    flip = np.sign(components[np.arange(out_dims), np.argmax(np.abs(components), axis=1)])
    flip[flip == 0] = 1.0
    components = components * flip[:, None]
    variances = singular**2
    total = variances.sum()
    ratios = variances[:out_dims] / total if total > 0 else np.zeros(out_dims)
    return centered @ components.T, components, ratios
