"""The phased training procedures.

DEC: de-noising autoencoder pretraining (least squares) followed by joint
encoder/centroid optimization under the sharpened-assignment KL loss.

DSEC: pretraining with the MAE reconstruction loss, then a supervised
transfer phase (corruption removed, first dense layer frozen, softmax
classification head trained with binary cross-entropy), then the same
clustering phase with every encoder layer unfrozen.

All randomness is derived from the run Rng via labelled substreams
("pretrain", "transfer", "cluster"), so phases are individually
reproducible.
"""

from dataclasses import dataclass, field

import numpy as np

from stratembed.analysis.kmeans import kmeans
from stratembed.errors import DomainError, NonFiniteError
from stratembed.model.cluster import (
    ClusterHead,
    soft_assign,
    soft_assign_backward,
    target_distribution,
)
from stratembed.model.encoder import (
    AutoencoderModel,
    EncoderModel,
    build_autoencoder,
    encode,
)
from stratembed.model.specs import EncoderSpec, TrainingSchedule
from stratembed.nn.corrupt import gaussian_corrupt
from stratembed.nn.layers import DenseLayer, as_matrix
from stratembed.nn.losses import loss_and_grad
from stratembed.nn.optim import AdamState, adam_step
from stratembed.rng import Rng


@dataclass
class PhaseReport:
    """Per-phase loss histories, embedding snapshots and trained models."""

    method: str
    k: int
    phase_losses: dict
    embeddings: dict  # phase name -> embedding of the training data
    encoder: EncoderModel
    cluster_head: ClusterHead = None
    autoencoder: AutoencoderModel = None
    encoder_after_transfer: EncoderModel = None
    classifier_head: DenseLayer = None
    classifier_probs: np.ndarray = None  # positive-class probability per row
    diagnostics: dict = field(default_factory=dict)


def _batches(n: int, batch_size, rng: Rng):
    if batch_size is None or batch_size >= n:
        yield np.arange(n)
        return
    order = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


def _adam_from(schedule: TrainingSchedule) -> AdamState:
    return AdamState(schedule.learning_rate, schedule.beta1, schedule.beta2,
                     schedule.epsilon)


def _layer_params(layers):
    params = []
    for layer in layers:
        if layer.trainable:
            params.extend((layer.weights, layer.bias))
    return params


def pretrain_autoencoder(data, spec: EncoderSpec, schedule: TrainingSchedule,
                         rng: Rng, loss_kind: str = "mae"):
    """Phase 1: train the de-noising autoencoder to reconstruct clean inputs.

    ``spec.activations`` must be resolved (see ``EncoderSpec.resolved``).
    Returns ``(AutoencoderModel, per-epoch loss history)``.
    """
    data = as_matrix(data)
    model = build_autoencoder(spec, rng)
    layers = model.all_layers
    adam = _adam_from(schedule)
    params = _layer_params(layers)
    history = []
    n = data.shape[0]
    for epoch in range(schedule.pretrain_epochs):
        total, count = 0.0, 0
        for idx in _batches(n, schedule.batch_size, rng):
            clean = data[idx]
            h = gaussian_corrupt(clean, spec.corruption_sigma, rng)
            inputs, caches = [], []
            for layer in layers:
                inputs.append(h)
                h, cache = layer.forward(h)
                caches.append(cache)
            loss, grad = loss_and_grad(loss_kind, h, clean)
            grads = []
            for layer, cache, inp in zip(reversed(layers), reversed(caches), reversed(inputs)):
                grad, gw, gb = layer.backward(grad, cache, inp)
                if layer.trainable:
                    grads.extend((gb, gw))
            adam_step(adam, params, list(reversed(grads)))
            total += loss * len(idx)
            count += len(idx)
        epoch_loss = total / count
        if not np.isfinite(epoch_loss):
            raise NonFiniteError(f"pretraining loss became non-finite at epoch {epoch}")
        history.append(epoch_loss)
    return model, history


def transfer_train(autoencoder: AutoencoderModel, data, labels,
                   schedule: TrainingSchedule, rng: Rng):
    """Phase 2: supervised reshaping of the embedding.

    Drops the decoder and corruption, freezes the first dense layer, appends
    a 2-unit softmax head and minimizes binary cross-entropy on one-hot
    targets. Returns ``(EncoderModel, head, loss history)``; the passed
    autoencoder is left untouched.
    """
    data = as_matrix(data)
    labels = np.asarray(labels).reshape(-1)
    if not np.isin(labels, (0, 1)).all():
        raise DomainError("labels must be binary (0/1)")
    if len(np.unique(labels)) < 2:
        raise DomainError("labels contain a single class; cross-entropy is degenerate")
    if labels.shape[0] != data.shape[0]:
        raise DomainError(f"{data.shape[0]} rows but {labels.shape[0]} labels")

    enc = autoencoder.encoder.copy()
    enc.layers[0].trainable = False
    head = DenseLayer.initialize(enc.spec.embedding_dim, 2, "softmax", rng)
    onehot = np.zeros((len(labels), 2))
    onehot[np.arange(len(labels)), labels.astype(int)] = 1.0

    adam = _adam_from(schedule)
    params = _layer_params(enc.layers) + [head.weights, head.bias]
    history = []
    n = data.shape[0]
    for epoch in range(schedule.transfer_epochs):
        total, count = 0.0, 0
        for idx in _batches(n, schedule.batch_size, rng):
            z, inputs, caches = enc.forward(data[idx])
            probs, head_cache = head.forward(z)
            loss, grad = loss_and_grad("bce", probs, onehot[idx])
            grad_z, head_gw, head_gb = head.backward(grad, head_cache, z)
            _, layer_grads = enc.backward(grad_z, inputs, caches)
            grads = [g for i, (gw, gb) in enumerate(layer_grads)
                     if enc.layers[i].trainable for g in (gw, gb)]
            grads += [head_gw, head_gb]
            adam_step(adam, params, grads)
            total += loss * len(idx)
            count += len(idx)
        epoch_loss = total / count
        if not np.isfinite(epoch_loss):
            raise NonFiniteError(f"transfer loss became non-finite at epoch {epoch}")
        history.append(epoch_loss)
    return enc, head, history


def cluster_finetune(encoder: EncoderModel, data, k: int,
                     schedule: TrainingSchedule, rng: Rng):
    """Phase 3: joint centroid + encoder optimization under the KL loss.

    Centroids start from k-means on the current embedding; every encoder
    layer is unfrozen. The target distribution refreshes once per epoch; with
    ``schedule.early_stop`` the loop ends once fewer than
    ``early_stop_tol`` of hard assignments change between refreshes.
    Returns ``(EncoderModel, ClusterHead, history, diagnostics)``.
    """
    data = as_matrix(data)
    enc = encoder.copy()
    for layer in enc.layers:
        layer.trainable = True
    assert all(layer.trainable for layer in enc.layers)

    z0 = encode(enc, data)
    centroids, _ = kmeans(z0, k, rng.derive("kmeans-init"))
    head = ClusterHead(centroids.copy(), alpha=1.0)

    adam = _adam_from(schedule)
    params = _layer_params(enc.layers) + [head.centroids]
    history = []
    diagnostics = {"q_row_dev": [], "p_row_dev": [], "assignment_change": []}
    prev_hard = None
    n = data.shape[0]
    for epoch in range(schedule.cluster_epochs):
        z = encode(enc, data)
        q = soft_assign(z, head)
        p = target_distribution(q)
        diagnostics["q_row_dev"].append(float(np.abs(q.sum(axis=1) - 1.0).max()))
        diagnostics["p_row_dev"].append(float(np.abs(p.sum(axis=1) - 1.0).max()))
        loss_epoch, _ = loss_and_grad("kl_divergence", q, p)
        if not np.isfinite(loss_epoch):
            raise NonFiniteError(f"clustering loss became non-finite at epoch {epoch}")
        history.append(loss_epoch)

        hard = np.argmax(q, axis=1)
        if prev_hard is not None:
            changed = float(np.mean(hard != prev_hard))
            diagnostics["assignment_change"].append(changed)
            if schedule.early_stop and changed < schedule.early_stop_tol:
                break
        prev_hard = hard

        for idx in _batches(n, schedule.batch_size, rng):
            zb, inputs, caches = enc.forward(data[idx])
            qb = soft_assign(zb, head)
            _, grad_q = loss_and_grad("kl_divergence", qb, p[idx])
            grad_z, grad_mu = soft_assign_backward(zb, head, grad_q)
            _, layer_grads = enc.backward(grad_z, inputs, caches)
            grads = [g for gw, gb in layer_grads for g in (gw, gb)]
            grads.append(grad_mu)
            adam_step(adam, params, grads)
    return enc, head, history, diagnostics


def run_dec(data, labels_for_eval_only, spec: EncoderSpec,
            schedule: TrainingSchedule, k: int, rng: Rng) -> PhaseReport:
    """Unsupervised baseline: phases 1 and 3 only; labels never train."""
    spec = spec.resolved("dec")
    auto, pre_hist = pretrain_autoencoder(
        data, spec, schedule, rng.derive("pretrain"), loss_kind="mse"
    )
    z_pre = encode(auto.encoder, data)
    enc, head, cl_hist, diagnostics = cluster_finetune(
        auto.encoder, data, k, schedule, rng.derive("cluster")
    )
    return PhaseReport(
        method="dec",
        k=k,
        phase_losses={"pretrain": pre_hist, "cluster": cl_hist},
        embeddings={"pretrain": z_pre, "cluster": encode(enc, data)},
        encoder=enc,
        cluster_head=head,
        autoencoder=auto,
        diagnostics=diagnostics,
    )


def run_dsec(data, labels, spec: EncoderSpec, schedule: TrainingSchedule,
             k: int, rng: Rng) -> PhaseReport:
    """Three sequential phases; the report carries all embedding snapshots."""
    spec = spec.resolved("dsec")
    auto, pre_hist = pretrain_autoencoder(
        data, spec, schedule, rng.derive("pretrain"), loss_kind="mae"
    )
    z_pre = encode(auto.encoder, data)
    enc_t, head, tr_hist = transfer_train(
        auto, data, labels, schedule, rng.derive("transfer")
    )
    z_transfer = encode(enc_t, data)
    probs, _ = head.forward(z_transfer)
    enc, cluster_head, cl_hist, diagnostics = cluster_finetune(
        enc_t, data, k, schedule, rng.derive("cluster")
    )
    return PhaseReport(
        method="dsec",
        k=k,
        phase_losses={"pretrain": pre_hist, "transfer": tr_hist, "cluster": cl_hist},
        embeddings={
            "pretrain": z_pre,
            "transfer": z_transfer,
            "cluster": encode(enc, data),
        },
        encoder=enc,
        cluster_head=cluster_head,
        autoencoder=auto,
        encoder_after_transfer=enc_t,
        classifier_head=head,
        classifier_probs=probs[:, 1].copy(),
        diagnostics=diagnostics,
    )
