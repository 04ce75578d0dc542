"""Cohort data containers."""

from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from stratembed.errors import DomainError, ShapeMismatchError

HF_CODE_PREFIX = "I50"  # heart-failure diagnosis family


@dataclass
class AdmissionRecord:
    """One observation row: measurements at a timestamp within an admission."""

    patient_id: str
    admission_id: str
    timestamp: datetime
    measurements: dict  # name -> float; absent key = missing
    diagnosis_codes: frozenset
    age: float
    sex: int
    label: int

    def __post_init__(self):
        if not self.patient_id or not self.admission_id:
            raise DomainError("patient_id and admission_id must be non-empty")
        if self.age < 0:
            raise DomainError(f"age must be >= 0, got {self.age}")
        if self.sex not in (0, 1):
            raise DomainError(f"sex must be 0/1, got {self.sex}")
        if self.label not in (0, 1):
            raise DomainError(f"label must be 0/1, got {self.label}")
        self.diagnosis_codes = frozenset(self.diagnosis_codes)

    def has_hf_code(self) -> bool:
        return any(code.startswith(HF_CODE_PREFIX) for code in self.diagnosis_codes)


@dataclass
class PatientMatrix:
    """Row-per-patient features with a presence mask, labels and code sets.

    Missing cells hold NaN and are False in ``mask``; imputation replaces
    them before any model sees the matrix.
    """

    features: np.ndarray
    mask: np.ndarray
    labels: np.ndarray
    feature_names: tuple
    codes: list
    patient_ids: list
    ages: np.ndarray = None
    sexes: np.ndarray = None
    subgroup_ids: np.ndarray = None  # planted ground truth, synthetic cohorts only

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.mask = np.asarray(self.mask, dtype=bool)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.feature_names = tuple(self.feature_names)
        if self.features.shape != self.mask.shape:
            raise ShapeMismatchError(
                f"features {self.features.shape} and mask {self.mask.shape} must be congruent"
            )
        n, d = self.features.shape
        if len(self.feature_names) != d:
            raise ShapeMismatchError(
                f"{d} feature columns but {len(self.feature_names)} names"
            )
        for name, length in (("labels", len(self.labels)), ("codes", len(self.codes)),
                             ("patient_ids", len(self.patient_ids))):
            if length != n:
                raise ShapeMismatchError(f"{name} has {length} entries for {n} patients")
        self.codes = [frozenset(c) for c in self.codes]

    @property
    def n_patients(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, rows) -> "PatientMatrix":
        rows = np.asarray(rows)
        return PatientMatrix(
            features=self.features[rows].copy(),
            mask=self.mask[rows].copy(),
            labels=self.labels[rows].copy(),
            feature_names=self.feature_names,
            codes=[self.codes[i] for i in rows],
            patient_ids=[self.patient_ids[i] for i in rows],
            ages=None if self.ages is None else self.ages[rows].copy(),
            sexes=None if self.sexes is None else self.sexes[rows].copy(),
            subgroup_ids=None if self.subgroup_ids is None else self.subgroup_ids[rows].copy(),
        )
