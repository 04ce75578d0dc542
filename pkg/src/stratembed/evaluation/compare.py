"""The three-way comparison: PCA + forest, DEC + forest, DSEC classifier.

Embeddings and forests are always fitted on training rows only; the held-out
test set is scored once per method. The DSEC ROC uses the transfer-phase
classifier probabilities; a post-clustering variant (same head applied to the
final encoder's embedding) is reported alongside because either reading is
defensible.
"""

from dataclasses import dataclass, field

import numpy as np

from stratembed.analysis.pca import pca
from stratembed.cohort.records import PatientMatrix
from stratembed.errors import DomainError
from stratembed.evaluation.forest import forest_predict, forest_train
from stratembed.evaluation.roc import roc_auc
from stratembed.model.encoder import encode
from stratembed.model.specs import EncoderSpec, TrainingSchedule
from stratembed.model.training import run_dec, run_dsec, transfer_train, pretrain_autoencoder
from stratembed.rng import Rng

# Headline values reported for the original (proprietary) cohort, kept as
# documentation constants for context in emitted reports.
REFERENCE_AUCS = {"dsec": 0.84, "dec_rf": 0.73, "pca_rf": 0.66}

EMBED_DIMS = 3  # PCA baseline mirrors the encoder's embedding width


@dataclass
class ComparisonReport:
    aucs: dict
    curves: dict
    fingerprint: str
    reference_aucs: dict = field(default_factory=lambda: dict(REFERENCE_AUCS))
    fold_aucs: list = field(default_factory=list)
    dsec_report: object = None
    dec_report: object = None

    def __post_init__(self):
        for name, value in self.aucs.items():
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"AUC {name}={value} outside [0, 1]")


def compare_methods(train: PatientMatrix, test: PatientMatrix, spec: EncoderSpec,
                    schedule: TrainingSchedule, k: int, rng: Rng,
                    n_trees: int = 100, max_depth: int = 8, folds=None,
                    fingerprint: str = "", dsec_report=None,
                    dec_report=None) -> ComparisonReport:
    """Run all three pipelines and score the held-out test set.

    Pre-trained DEC/DSEC phase reports may be passed to reuse checkpoints;
    anything missing is trained here from the run Rng's labelled substreams.
    ``folds`` (pairs of train-row index arrays) adds per-fold validation AUCs
    for the DSEC classifier.
    """
    x_train, y_train = train.features, train.labels
    x_test, y_test = test.features, test.labels
    if not (np.isfinite(x_train).all() and np.isfinite(x_test).all()):
        raise DomainError("compare_methods requires imputed, standardized features")

    aucs = {}
    curves = {}

    # (a) PCA embedding + random forest
    _, components, _ = pca(x_train, EMBED_DIMS)
    train_mean = x_train.mean(axis=0)
    proj_train = (x_train - train_mean) @ components.T
    proj_test = (x_test - train_mean) @ components.T
    forest = forest_train(proj_train, y_train, n_trees, max_depth, rng.derive("pca-forest"))
    curves["pca_rf"] = roc_auc(forest_predict(forest, proj_test), y_test)

    # (b) DEC embedding + random forest
    if dec_report is None:
        dec_report = run_dec(x_train, y_train, spec, schedule, k, rng.derive("dec"))
    emb_train = encode(dec_report.encoder, x_train)
    emb_test = encode(dec_report.encoder, x_test)
    forest = forest_train(emb_train, y_train, n_trees, max_depth, rng.derive("dec-forest"))
    curves["dec_rf"] = roc_auc(forest_predict(forest, emb_test), y_test)

    # (c) DSEC classification head
    if dsec_report is None:
        dsec_report = run_dsec(x_train, y_train, spec, schedule, k, rng.derive("dsec"))
    head = dsec_report.classifier_head
    probs_test, _ = head.forward(encode(dsec_report.encoder_after_transfer, x_test))
    curves["dsec"] = roc_auc(probs_test[:, 1], y_test)
    probs_post, _ = head.forward(encode(dsec_report.encoder, x_test))
    curves["dsec_postcluster"] = roc_auc(probs_post[:, 1], y_test)

    aucs = {name: curve.auc for name, curve in curves.items()}

    fold_aucs = []
    if folds:
        resolved = spec.resolved("dsec")
        for i, (fit_rows, val_rows) in enumerate(folds):
            fold_rng = rng.derive(f"fold-{i}")
            auto, _ = pretrain_autoencoder(
                x_train[fit_rows], resolved, schedule, fold_rng.derive("pretrain"),
                loss_kind="mae",
            )
            enc, fold_head, _ = transfer_train(
                auto, x_train[fit_rows], y_train[fit_rows], schedule,
                fold_rng.derive("transfer"),
            )
            val_probs, _ = fold_head.forward(encode(enc, x_train[val_rows]))
            fold_aucs.append(roc_auc(val_probs[:, 1], y_train[val_rows]).auc)

    return ComparisonReport(
        aucs=aucs,
        curves=curves,
        fingerprint=fingerprint,
        fold_aucs=fold_aucs,
        dsec_report=dsec_report,
        dec_report=dec_report,
    )
