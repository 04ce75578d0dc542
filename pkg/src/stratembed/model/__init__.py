"""Phased encoder training: autoencoder, supervised transfer, cluster tuning."""

from stratembed.model.checkpoint import load_checkpoint, save_checkpoint
from stratembed.model.cluster import (
    ClusterHead,
    soft_assign,
    soft_assign_backward,
    target_distribution,
)
from stratembed.model.encoder import AutoencoderModel, EncoderModel, encode
from stratembed.model.specs import EncoderSpec, TrainingSchedule
from stratembed.model.training import (
    PhaseReport,
    cluster_finetune,
    pretrain_autoencoder,
    run_dec,
    run_dsec,
    transfer_train,
)

__all__ = [
    "AutoencoderModel",
    "ClusterHead",
    "EncoderModel",
    "EncoderSpec",
    "PhaseReport",
    "TrainingSchedule",
    "cluster_finetune",
    "encode",
    "load_checkpoint",
    "pretrain_autoencoder",
    "run_dec",
    "run_dsec",
    "save_checkpoint",
    "soft_assign",
    "soft_assign_backward",
    "target_distribution",
    "transfer_train",
]
