"""Per-admission aggregation, presence filtering and train-fitted scaling."""

import logging
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from stratembed.cohort.records import AdmissionRecord, PatientMatrix
from stratembed.errors import DomainError

log = logging.getLogger("stratembed")


def aggregate_and_select(records):
    """Collapse measurement rows to one admission per patient.

    Measurements are averaged within an admission. Heart-failure patients
    keep their earliest I50*-coded admission (error when none exists);
    controls keep the admission with the most features present, ties broken
    by earliest timestamp. Returns one AdmissionRecord per patient, ordered
    by patient id.
    """
    by_patient = defaultdict(lambda: defaultdict(list))
    for rec in records:
        by_patient[rec.patient_id][rec.admission_id].append(rec)

    out = []
    for patient_id in sorted(by_patient):
        admissions = []
        for admission_id in sorted(by_patient[patient_id]):
            rows = by_patient[patient_id][admission_id]
            values = defaultdict(list)
            codes = set()
            for row in rows:
                for name, value in row.measurements.items():
                    values[name].append(value)
                codes |= row.diagnosis_codes
            first = min(rows, key=lambda r: r.timestamp)
            admissions.append(
                AdmissionRecord(
                    patient_id=patient_id,
                    admission_id=admission_id,
                    timestamp=first.timestamp,
                    measurements={k: float(np.mean(v)) for k, v in values.items()},
                    diagnosis_codes=frozenset(codes),
                    age=first.age,
                    sex=first.sex,
                    label=first.label,
                )
            )
        label = max(a.label for a in admissions)
        if label == 1:
            hf_admissions = [a for a in admissions if a.has_hf_code()]
            if not hf_admissions:
                raise DomainError(
                    f"patient {patient_id} is labelled heart failure but has no I50* admission"
                )
            chosen = min(hf_admissions, key=lambda a: a.timestamp)
        else:
            chosen = min(admissions, key=lambda a: (-len(a.measurements), a.timestamp))
        out.append(chosen)
    return out


def build_matrix(per_patient, feature_names) -> PatientMatrix:
    """Assemble per-patient records into a PatientMatrix over ``feature_names``."""
    n = len(per_patient)
    d = len(feature_names)
    features = np.full((n, d), np.nan)
    mask = np.zeros((n, d), dtype=bool)
    for i, rec in enumerate(per_patient):
        for j, name in enumerate(feature_names):
            if name in rec.measurements:
                features[i, j] = rec.measurements[name]
                mask[i, j] = True
    return PatientMatrix(
        features=features,
        mask=mask,
        labels=np.array([r.label for r in per_patient]),
        feature_names=feature_names,
        codes=[r.diagnosis_codes for r in per_patient],
        patient_ids=[r.patient_id for r in per_patient],
        ages=np.array([r.age for r in per_patient], dtype=np.float64),
        sexes=np.array([r.sex for r in per_patient], dtype=np.int64),
    )


def filter_features_and_cases(matrix: PatientMatrix, min_feature_presence: float = 0.6,
                              min_case_coverage: float = 0.6) -> PatientMatrix:
    """Drop sparse features, then sparse patients (strict thresholds).

    A feature survives only if present in more than ``min_feature_presence``
    of patients; a patient survives only if at least ``min_case_coverage`` of
    the surviving features are present (dropped when strictly below).
    Applying the filter twice is a no-op.
    """
    presence = matrix.mask.mean(axis=0)
    keep_features = np.flatnonzero(presence > min_feature_presence)
    if keep_features.size == 0:
        raise DomainError(
            f"no feature exceeds {min_feature_presence:.0%} presence; nothing to keep"
        )
    coverage = matrix.mask[:, keep_features].mean(axis=1)
    keep_rows = np.flatnonzero(~(coverage < min_case_coverage))
    filtered = matrix.subset(keep_rows)
    return PatientMatrix(
        features=filtered.features[:, keep_features],
        mask=filtered.mask[:, keep_features],
        labels=filtered.labels,
        feature_names=tuple(matrix.feature_names[j] for j in keep_features),
        codes=filtered.codes,
        patient_ids=filtered.patient_ids,
        ages=filtered.ages,
        sexes=filtered.sexes,
        subgroup_ids=filtered.subgroup_ids,
    )


@dataclass
class Scaler:
    """Imputation means and z-score statistics fitted on training rows only."""

    means: np.ndarray
    stds: np.ndarray
    feature_names: tuple

    def transform(self, matrix: PatientMatrix) -> PatientMatrix:
        if matrix.feature_names != self.feature_names:
            raise DomainError("matrix features do not match the fitted scaler")
        filled = np.where(matrix.mask, matrix.features, self.means)
        standardized = (filled - self.means) / self.stds
        return PatientMatrix(
            features=standardized,
            mask=np.ones_like(matrix.mask),
            labels=matrix.labels,
            feature_names=matrix.feature_names,
            codes=matrix.codes,
            patient_ids=matrix.patient_ids,
            ages=matrix.ages,
            sexes=matrix.sexes,
            subgroup_ids=matrix.subgroup_ids,
        )


def impute_and_standardize(matrix: PatientMatrix):
    """Fit mean imputation + z-scoring on ``matrix`` and transform it.

    Returns ``(transformed, Scaler)``; apply ``Scaler.transform`` to test
    folds so no test statistics leak into training.
    """
    means = np.empty(matrix.n_features)
    for j in range(matrix.n_features):
        observed = matrix.features[matrix.mask[:, j], j]
        means[j] = observed.mean() if observed.size else 0.0
    filled = np.where(matrix.mask, matrix.features, means)
    stds = filled.std(axis=0)
    zero_var = stds == 0.0
    if zero_var.any():
        names = [matrix.feature_names[j] for j in np.flatnonzero(zero_var)]
        log.warning("zero-variance features standardized to 0: %s", names)
        stds = np.where(zero_var, 1.0, stds)
    scaler = Scaler(means=means, stds=stds, feature_names=matrix.feature_names)
    return scaler.transform(matrix), scaler
