"""Versioned model checkpoints.

Format: numpy ``.npz`` holding every weight array bit-exactly plus a JSON
metadata entry (format version, method, phase, layer sizes, activations,
trainable flags, loss histories, config fingerprint and seed). Embeddings are
not stored; they are recomputed from data on load.
"""

import json

import numpy as np

from stratembed.errors import DomainError
from stratembed.model.cluster import ClusterHead
from stratembed.model.encoder import EncoderModel
from stratembed.model.specs import EncoderSpec
from stratembed.model.training import PhaseReport
from stratembed.nn.layers import DenseLayer

FORMAT_VERSION = 1


def _pack_layers(arrays, prefix, layers):
    for i, layer in enumerate(layers):
        arrays[f"{prefix}_w_{i}"] = layer.weights
        arrays[f"{prefix}_b_{i}"] = layer.bias


def _unpack_layers(data, prefix, activations, trainable):
    layers = []
    for i, (act, tr) in enumerate(zip(activations, trainable)):
        layers.append(DenseLayer(data[f"{prefix}_w_{i}"], data[f"{prefix}_b_{i}"], act, tr))
    return layers


def save_checkpoint(path, report: PhaseReport, fingerprint: str = "", seed=None):
    """Write the report's models to ``path``; loading restores them bit-exactly."""
    meta = {
        "format_version": FORMAT_VERSION,
        "method": report.method,
        "k": report.k,
        "phase": list(report.phase_losses)[-1] if report.phase_losses else "init",
        "layer_sizes": list(report.encoder.spec.layer_sizes),
        "corruption_sigma": report.encoder.spec.corruption_sigma,
        "activations": list(report.encoder.spec.activations),
        "trainable": [layer.trainable for layer in report.encoder.layers],
        "fingerprint": fingerprint,
        "seed": seed,
        "phase_losses": {k: list(map(float, v)) for k, v in report.phase_losses.items()},
        "has_cluster_head": report.cluster_head is not None,
        "has_classifier": report.classifier_head is not None,
        "has_transfer_encoder": report.encoder_after_transfer is not None,
        "alpha": report.cluster_head.alpha if report.cluster_head else None,
        "diagnostics": {k: list(map(float, v)) for k, v in report.diagnostics.items()},
    }
    arrays = {}
    _pack_layers(arrays, "enc", report.encoder.layers)
    if report.encoder_after_transfer is not None:
        meta["trainable_transfer"] = [l.trainable for l in report.encoder_after_transfer.layers]
        _pack_layers(arrays, "enct", report.encoder_after_transfer.layers)
    if report.classifier_head is not None:
        arrays["head_w"] = report.classifier_head.weights
        arrays["head_b"] = report.classifier_head.bias
    if report.cluster_head is not None:
        arrays["centroids"] = report.cluster_head.centroids
    arrays["__meta__"] = np.array(json.dumps(meta, sort_keys=True))
    np.savez(path, **arrays)


def load_checkpoint(path) -> PhaseReport:
    with np.load(path, allow_pickle=False) as data:
        meta = json.loads(str(data["__meta__"]))
        if meta.get("format_version") != FORMAT_VERSION:
            raise DomainError(
                f"checkpoint format {meta.get('format_version')} unsupported "
                f"(expected {FORMAT_VERSION})"
            )
        spec = EncoderSpec(
            layer_sizes=tuple(meta["layer_sizes"]),
            corruption_sigma=meta["corruption_sigma"],
            activations=tuple(meta["activations"]),
        )
        encoder = EncoderModel(
            _unpack_layers(data, "enc", meta["activations"], meta["trainable"]), spec
        )
        enc_t = None
        if meta["has_transfer_encoder"]:
            enc_t = EncoderModel(
                _unpack_layers(data, "enct", meta["activations"], meta["trainable_transfer"]),
                spec,
            )
        head = None
        if meta["has_classifier"]:
            head = DenseLayer(data["head_w"], data["head_b"], "softmax")
        cluster_head = None
        if meta["has_cluster_head"]:
            cluster_head = ClusterHead(data["centroids"], meta["alpha"])
        return PhaseReport(
            method=meta["method"],
            k=meta["k"],
            phase_losses=meta["phase_losses"],
            embeddings={},
            encoder=encoder,
            cluster_head=cluster_head,
            encoder_after_transfer=enc_t,
            classifier_head=head,
            diagnostics=meta.get("diagnostics", {}),
        )
