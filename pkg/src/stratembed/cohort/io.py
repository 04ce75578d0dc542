"""CSV input/output.

Admissions CSV (input): ``patient_id, admission_id, timestamp, age, sex,
label, <one column per measurement>, codes`` with ISO-8601 timestamps, empty
cells for missing measurements and semicolon-separated codes.

Matrix CSV (artifact): ``patient_id, label, <feature columns>, codes``.
Artifact files start with ``# key=value`` comment lines embedding the config
fingerprint; floats are written with shortest round-trip repr so a write/read
cycle is lossless.
"""

import csv
from datetime import datetime

import numpy as np

from stratembed.cohort.records import AdmissionRecord, PatientMatrix
from stratembed.errors import ConfigError, DomainError

RESERVED_ADMISSION_COLUMNS = ("patient_id", "admission_id", "timestamp", "age", "sex",
                              "label", "codes")


def load_admissions(path, measurement_columns=None):
    """Parse an admissions CSV into records plus a row-level error report.

    Unparseable rows are collected as ``(line_number, reason)`` instead of
    being dropped silently. Missing mandatory columns and duplicate
    (patient, admission, timestamp) keys raise.
    """
    records = []
    errors = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        rows = (line for line in fh if not line.startswith("#"))
        reader = csv.DictReader(rows)
        header = reader.fieldnames or []
        missing = [c for c in RESERVED_ADMISSION_COLUMNS if c not in header]
        if missing:
            raise ConfigError(f"admissions CSV missing mandatory columns: {missing}")
        if measurement_columns is None:
            measurement_columns = [c for c in header if c not in RESERVED_ADMISSION_COLUMNS]
        for lineno, row in enumerate(reader, start=2):
            try:
                records.append(_parse_admission_row(row, measurement_columns))
            except (ValueError, DomainError) as exc:
                errors.append((lineno, str(exc)))
                continue
            key = (records[-1].patient_id, records[-1].admission_id, records[-1].timestamp)
            if key in seen:
                raise DomainError(f"duplicate admission key {key} at line {lineno}")
            seen.add(key)
    return records, errors


def _parse_admission_row(row, measurement_columns):
    measurements = {}
    for col in measurement_columns:
        cell = (row.get(col) or "").strip()
        if cell:
            measurements[col] = float(cell)
    codes = frozenset(c for c in (row["codes"] or "").split(";") if c)
    return AdmissionRecord(
        patient_id=row["patient_id"].strip(),
        admission_id=row["admission_id"].strip(),
        timestamp=datetime.fromisoformat(row["timestamp"].strip()),
        measurements=measurements,
        diagnosis_codes=codes,
        age=float(row["age"]),
        sex=int(row["sex"]),
        label=int(row["label"]),
    )


def write_matrix_csv(matrix: PatientMatrix, path, metadata=None):
    """Write the matrix artifact; ``metadata`` becomes leading # comment lines."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key}={value}\n")
        writer = csv.writer(fh)
        writer.writerow(["patient_id", "label", *matrix.feature_names, "codes"])
        for i in range(matrix.n_patients):
            cells = [
                repr(float(matrix.features[i, j])) if matrix.mask[i, j] else ""
                for j in range(matrix.n_features)
            ]
            writer.writerow(
                [matrix.patient_ids[i], int(matrix.labels[i]), *cells,
                 ";".join(sorted(matrix.codes[i]))]
            )


def read_matrix_csv(path):
    """Read a matrix artifact; returns ``(PatientMatrix, metadata dict)``."""
    metadata = {}
    with open(path, newline="", encoding="utf-8") as fh:
        lines = []
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                metadata[key.strip()] = value
            else:
                lines.append(line)
    reader = csv.reader(lines)
    header = next(reader)
    if header[:2] != ["patient_id", "label"] or header[-1] != "codes":
        raise ConfigError(
            "matrix CSV must have columns patient_id, label, <features...>, codes"
        )
    feature_names = header[2:-1]
    ids, labels, rows, masks, codes = [], [], [], [], []
    for cells in reader:
        ids.append(cells[0])
        labels.append(int(cells[1]))
        values = cells[2:-1]
        rows.append([float(v) if v else np.nan for v in values])
        masks.append([bool(v) for v in values])
        codes.append(frozenset(c for c in cells[-1].split(";") if c))
    matrix = PatientMatrix(
        features=np.array(rows, dtype=np.float64).reshape(len(ids), len(feature_names)),
        mask=np.array(masks, dtype=bool).reshape(len(ids), len(feature_names)),
        labels=np.array(labels),
        feature_names=feature_names,
        codes=codes,
        patient_ids=ids,
    )
    return matrix, metadata
