"""Stratified held-out split plus stratified cross-validation folds."""

from dataclasses import dataclass

import numpy as np

from stratembed.cohort.records import PatientMatrix
from stratembed.errors import DomainError
from stratembed.rng import Rng


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.25
    n_folds: int = 5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise DomainError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if self.n_folds < 2:
            raise DomainError(f"n_folds must be >= 2, got {self.n_folds}")


def stratified_split(matrix: PatientMatrix, spec: SplitSpec):
    """Split into train/test preserving class proportions, plus CV folds.

    Returns ``(train, test, folds)`` where folds is a list of
    ``(fit_indices, val_indices)`` pairs into the train matrix; folds are
    stratified, pairwise disjoint and cover the training set.
    """
    classes = np.unique(matrix.labels)
    if len(classes) < 2:
        raise DomainError("both classes must be present to stratify")
    rng = Rng(spec.seed).derive("stratified-split")

    test_rows = []
    train_rows = []
    for cls in classes:
        rows = np.flatnonzero(matrix.labels == cls)
        shuffled = rows[rng.permutation(len(rows))]
        n_test = int(round(len(rows) * spec.test_fraction))
        n_test = min(max(n_test, 1), len(rows) - 1)
        test_rows.append(shuffled[:n_test])
        train_rows.append(shuffled[n_test:])
        if len(rows) - n_test < spec.n_folds:
            raise DomainError(
                f"class {cls} has {len(rows) - n_test} training members, "
                f"fewer than {spec.n_folds} folds"
            )
    test_idx = np.sort(np.concatenate(test_rows))
    train_idx = np.sort(np.concatenate(train_rows))

    train = matrix.subset(train_idx)
    test = matrix.subset(test_idx)

    fold_members = [[] for _ in range(spec.n_folds)]
    for cls in classes:
        rows = np.flatnonzero(train.labels == cls)
        shuffled = rows[rng.permutation(len(rows))]
        for i, row in enumerate(shuffled):
            fold_members[i % spec.n_folds].append(row)
    folds = []
    all_rows = np.arange(train.n_patients)
    for members in fold_members:
        val = np.sort(np.array(members, dtype=np.int64))
        fit = np.setdiff1d(all_rows, val)
        folds.append((fit, val))
    return train, test, folds
