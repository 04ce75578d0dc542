"""ROC curves and trapezoidal AUC.

Operating points are swept over distinct score values, so tied scores cross
their threshold simultaneously (diagonal curve segments); the trapezoid rule
then reproduces the tie-corrected Mann-Whitney statistic exactly.
"""

from dataclasses import dataclass

import numpy as np

from stratembed.errors import DomainError


@dataclass
class RocCurve:
    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    def __post_init__(self):
        if (np.diff(self.fpr) < 0).any() or (np.diff(self.tpr) < 0).any():
            raise DomainError("ROC rates must be non-decreasing")
        if not (self.fpr[0] == 0 and self.tpr[0] == 0 and self.fpr[-1] == 1 and self.tpr[-1] == 1):
            raise DomainError("ROC must span (0,0) to (1,1)")


def roc_auc(scores, labels) -> RocCurve:
    """ROC curve for binary ``labels`` scored by ``scores`` (higher = positive)."""
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    if scores.shape != labels.shape:
        raise DomainError(f"{scores.shape[0]} scores but {labels.shape[0]} labels")
    if not np.isin(labels, (0, 1)).all():
        raise DomainError("labels must be binary (0/1)")
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DomainError("both classes must be present to form a ROC curve")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    # last index of each distinct score block
    boundary = np.r_[np.flatnonzero(np.diff(sorted_scores)), len(scores) - 1]
    tps = np.cumsum(sorted_labels)[boundary]
    fps = np.cumsum(1 - sorted_labels)[boundary]
    tpr = np.r_[0.0, tps / n_pos]
    fpr = np.r_[0.0, fps / n_neg]
    thresholds = np.r_[np.inf, sorted_scores[boundary]]
    auc = float(np.trapezoid(tpr, fpr))
    return RocCurve(thresholds=thresholds, fpr=fpr, tpr=tpr, auc=auc)
