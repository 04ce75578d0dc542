import numpy as np
import numpy.testing as npt
import pytest

from stratembed.errors import DomainError, ShapeMismatchError
from stratembed.nn import AdamState, adam_step
from stratembed.rng import Rng


def test_zero_gradients_are_a_noop_for_any_step_count():
    state = AdamState(learning_rate=0.05)
    p = np.array([1.0, -2.0, 3.0])
    orig = p.copy()
    for _ in range(7):
        adam_step(state, [p], [np.zeros(3)])
    npt.assert_array_equal(p, orig)
    assert state.step_count == 7


def test_first_step_magnitude_is_learning_rate():
    # m-hat = g, v-hat = g^2 so the first update is lr * sign(g) up to epsilon
    state = AdamState(learning_rate=0.01)
    p = np.array([1.0])
    adam_step(state, [p], [np.array([2.0])])
    npt.assert_allclose(p, [0.99], atol=1e-8)


def test_consecutive_identical_steps_descend_monotonically():
    state = AdamState(learning_rate=0.01)
    p = np.array([1.0])
    prev = p[0]
    for _ in range(2):
        adam_step(state, [p], [np.array([2.0])])
        assert p[0] < prev
        prev = p[0]


def test_shape_mismatch_raises():
    state = AdamState()
    with pytest.raises(ShapeMismatchError, match="block 0"):
        adam_step(state, [np.zeros(3)], [np.zeros(4)])


def test_nonfinite_gradient_names_block():
    state = AdamState()
    g_bad = np.array([1.0, np.nan])
    with pytest.raises(DomainError, match="block 1"):
        adam_step(state, [np.zeros(2), np.zeros(2)], [np.zeros(2), g_bad])


def test_invalid_hyperparameters_rejected():
    with pytest.raises(DomainError):
        AdamState(beta1=1.0)
    with pytest.raises(DomainError):
        AdamState(learning_rate=0.0)


def test_matches_reference_adam_recurrence():
    # independent recurrence written out longhand
    rng = Rng(2)
    p = rng.normal(size=10)
    state = AdamState(learning_rate=0.01, beta1=0.9, beta2=0.999, epsilon=1e-8)
    p_ref = p.copy()
    m = np.zeros(10)
    v = np.zeros(10)
    for t in range(1, 6):
        g = rng.normal(size=10)
        adam_step(state, [p], [g])
        m = 0.9 * m + 0.1 * g
        v = 0.999 * v + 0.001 * g * g
        mhat = m / (1 - 0.9**t)
        vhat = v / (1 - 0.999**t)
        p_ref -= 0.01 * mhat / (np.sqrt(vhat) + 1e-8)
    npt.assert_allclose(p, p_ref, rtol=1e-12)


def test_multiblock_updates_in_place_views():
    state = AdamState(learning_rate=0.1)
    w = np.ones((2, 2))
    b = np.ones(2)
    adam_step(state, [w, b], [np.ones((2, 2)), np.ones(2)])
    assert (w < 1).all() and (b < 1).all()
    assert state.first_moment[0].shape == (2, 2)
