"""Cohort ingestion, preprocessing, matching, splitting and synthesis."""

from stratembed.cohort.io import (
    load_admissions,
    read_matrix_csv,
    write_matrix_csv,
)
from stratembed.cohort.matching import propensity_match
from stratembed.cohort.preprocess import (
    Scaler,
    aggregate_and_select,
    build_matrix,
    filter_features_and_cases,
    impute_and_standardize,
)
from stratembed.cohort.records import AdmissionRecord, PatientMatrix
from stratembed.cohort.splits import SplitSpec, stratified_split
from stratembed.cohort.synthetic import (
    SubgroupSpec,
    SyntheticSpec,
    default_synthetic_spec,
    generate_synthetic_cohort,
)

__all__ = [
    "AdmissionRecord",
    "PatientMatrix",
    "Scaler",
    "SplitSpec",
    "SubgroupSpec",
    "SyntheticSpec",
    "aggregate_and_select",
    "build_matrix",
    "default_synthetic_spec",
    "filter_features_and_cases",
    "generate_synthetic_cohort",
    "impute_and_standardize",
    "load_admissions",
    "propensity_match",
    "read_matrix_csv",
    "stratified_split",
    "write_matrix_csv",
]
