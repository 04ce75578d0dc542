"""Stochastic input corruption for de-noising training."""

import numpy as np

from stratembed.errors import DomainError
from stratembed.nn.layers import as_matrix
from stratembed.rng import Rng


def gaussian_corrupt(x, sigma: float, rng: Rng) -> np.ndarray:
    """Add elementwise N(0, sigma^2) noise drawn from ``rng``.

    sigma = 0 returns an untouched copy without advancing the generator, so a
    noise-free run consumes the same stream as a model with no noise layer.
    """
    x = as_matrix(x)
    if sigma < 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return x.copy()
    return x + rng.normal(0.0, sigma, size=x.shape)
