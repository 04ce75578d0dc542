"""Propensity-score matching of controls to cases.

The score is a logistic model of case membership on the covariates, fitted
with the package's own dense-layer engine (softmax head + binary
cross-entropy, full-batch Adam). Matching is greedy 1:1 nearest neighbour on
the score, without replacement, over a case order randomized by the caller's
Rng.
"""

from dataclasses import dataclass

import numpy as np

from stratembed.errors import DomainError
from stratembed.nn.layers import DenseLayer, as_matrix
from stratembed.nn.losses import loss_and_grad
from stratembed.nn.optim import AdamState, adam_step
from stratembed.rng import Rng


@dataclass
class MatchReport:
    control_indices: np.ndarray  # matched control row per matched case
    case_indices: np.ndarray  # cases in matching order
    unmatched_cases: np.ndarray
    case_scores: np.ndarray
    control_scores: np.ndarray

    def standardized_mean_difference(self, case_values, control_values) -> float:
        """Balance statistic for one covariate after matching."""
        matched_cases = np.asarray(case_values)[self.case_indices]
        matched_controls = np.asarray(control_values)[self.control_indices]
        pooled = np.sqrt((matched_cases.var() + matched_controls.var()) / 2.0)
        if pooled == 0:
            return 0.0
        return float(abs(matched_cases.mean() - matched_controls.mean()) / pooled)


def _fit_propensity(covariates, is_case, rng, epochs=400, lr=0.05):
    x = covariates
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std[std == 0] = 1.0
    xs = (x - mean) / std
    head = DenseLayer.initialize(xs.shape[1], 2, "softmax", rng)
    onehot = np.c_[1.0 - is_case, is_case]
    adam = AdamState(learning_rate=lr)
    params = [head.weights, head.bias]
    for _ in range(epochs):
        probs, cache = head.forward(xs)
        _, grad = loss_and_grad("bce", probs, onehot)
        _, gw, gb = head.backward(grad, cache, xs)
        adam_step(adam, params, [gw, gb])
    probs, _ = head.forward(xs)
    return probs[:, 1]


def propensity_match(case_covariates, control_covariates, rng: Rng) -> MatchReport:
    """Match each case to its nearest-score unused control.

    Covariates are (n, c) arrays (for the cohort pipeline: age and sex).
    When controls run out a partial matching is returned, with the leftover
    cases reported rather than raised.
    """
    cases = as_matrix(case_covariates)
    controls = as_matrix(control_covariates)
    if cases.shape[0] == 0 or controls.shape[0] == 0:
        raise DomainError("both case and control pools must be non-empty")
    if cases.shape[1] != controls.shape[1]:
        raise DomainError(
            f"cases have {cases.shape[1]} covariates but controls {controls.shape[1]}"
        )
    stacked = np.vstack([cases, controls])
    is_case = np.r_[np.ones(len(cases)), np.zeros(len(controls))]
    scores = _fit_propensity(stacked, is_case, rng.derive("propensity-fit"))
    case_scores = scores[: len(cases)]
    control_scores = scores[len(cases):]

    order = rng.derive("match-order").permutation(len(cases))
    available = np.ones(len(controls), dtype=bool)
    matched_controls = []
    matched_cases = []
    unmatched = []
    for ci in order:
        if not available.any():
            unmatched.append(ci)
            continue
        open_idx = np.flatnonzero(available)
        nearest = open_idx[np.argmin(np.abs(control_scores[open_idx] - case_scores[ci]))]
        available[nearest] = False
        matched_controls.append(nearest)
        matched_cases.append(ci)
    return MatchReport(
        control_indices=np.array(matched_controls, dtype=np.int64),
        case_indices=np.array(matched_cases, dtype=np.int64),
        unmatched_cases=np.array(unmatched, dtype=np.int64),
        case_scores=case_scores,
        control_scores=control_scores,
    )
