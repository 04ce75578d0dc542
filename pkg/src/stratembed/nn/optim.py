"""Adam optimizer over lists of parameter arrays."""

import numpy as np

from stratembed import backends
from stratembed.errors import DomainError, ShapeMismatchError


class AdamState:
    """Bias-corrected Adam state for an ordered list of parameter blocks.

    Moment accumulators are allocated lazily on the first step so the state
    can be constructed before the parameter shapes are known.
    """

    def __init__(self, learning_rate: float = 0.01, beta1: float = 0.9,
                 beta2: float = 0.999, epsilon: float = 1e-8):
        if not (0.0 <= beta1 < 1.0 and 0.0 <= beta2 < 1.0):
            raise DomainError(f"betas must lie in [0, 1): got {beta1}, {beta2}")
        if learning_rate <= 0.0 or epsilon <= 0.0:
            raise DomainError("learning_rate and epsilon must be positive")
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.step_count = 0
        self.first_moment = None
        self.second_moment = None


def adam_step(state: AdamState, params, grads):
    """Apply one Adam update in place to every parameter block.

    ``params`` and ``grads`` are equal-length lists of congruent float64
    arrays; only trainable blocks should be passed. Non-finite gradients
    raise, naming the offending block.
    """
    if len(params) != len(grads):
        raise ShapeMismatchError(
            f"got {len(params)} parameter blocks but {len(grads)} gradient blocks"
        )
    for idx, (p, g) in enumerate(zip(params, grads)):
        if p.shape != g.shape:
            raise ShapeMismatchError(
                f"parameter block {idx} has shape {p.shape} but gradient has {g.shape}"
            )
        if not np.isfinite(g).all():
            raise DomainError(f"non-finite gradient in parameter block {idx}")
    if state.first_moment is None:
        state.first_moment = [np.zeros_like(p) for p in params]
        state.second_moment = [np.zeros_like(p) for p in params]
    elif len(state.first_moment) != len(params):
        raise ShapeMismatchError(
            f"optimizer state tracks {len(state.first_moment)} blocks, got {len(params)}"
        )
    state.step_count += 1
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        backends.adam_step(
            p.reshape(-1), np.ascontiguousarray(g, dtype=np.float64).reshape(-1),
            m.reshape(-1), v.reshape(-1),
            state.step_count, state.learning_rate, state.beta1, state.beta2,
            state.epsilon,
        )
    return params
