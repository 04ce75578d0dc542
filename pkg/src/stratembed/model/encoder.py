"""Encoder and autoencoder assemblies over dense layers."""

from dataclasses import dataclass

import numpy as np

from stratembed.errors import ShapeMismatchError
from stratembed.model.specs import EncoderSpec, decoder_activations
from stratembed.nn.layers import DenseLayer, as_matrix
from stratembed.rng import Rng


@dataclass
class EncoderModel:
    """Ordered dense layers mapping the feature space to the embedding."""

    layers: list
    spec: EncoderSpec

    def __post_init__(self):
        sizes = self.spec.layer_sizes
        if len(self.layers) != len(sizes) - 1:
            raise ShapeMismatchError(
                f"spec {sizes} expects {len(sizes) - 1} layers, got {len(self.layers)}"
            )
        for i, layer in enumerate(self.layers):
            if (layer.in_dim, layer.out_dim) != (sizes[i], sizes[i + 1]):
                raise ShapeMismatchError(
                    f"layer {i} has dims {(layer.in_dim, layer.out_dim)}, "
                    f"spec requires {(sizes[i], sizes[i + 1])}"
                )

    def forward(self, x: np.ndarray):
        """Forward pass keeping per-layer inputs and caches for backprop."""
        inputs = []
        caches = []
        h = as_matrix(x)
        for layer in self.layers:
            inputs.append(h)
            h, cache = layer.forward(h)
            caches.append(cache)
        return h, inputs, caches

    def backward(self, grad_out: np.ndarray, inputs, caches):
        """Backpropagate; returns (grad_input, [per-layer (gw, gb)] in layer order)."""
        grads = [None] * len(self.layers)
        grad = grad_out
        for i in range(len(self.layers) - 1, -1, -1):
            grad, gw, gb = self.layers[i].backward(grad, caches[i], inputs[i])
            grads[i] = (gw, gb)
        return grad, grads

    def trainable_params(self):
        """Flat list of (layer_index, weights, bias) for trainable layers."""
        return [(i, l.weights, l.bias) for i, l in enumerate(self.layers) if l.trainable]

    def copy(self) -> "EncoderModel":
        return EncoderModel([l.copy() for l in self.layers], self.spec)


def build_encoder(spec: EncoderSpec, rng: Rng) -> EncoderModel:
    if spec.activations is None:
        raise ShapeMismatchError("spec activations unresolved; call spec.resolved(method)")
    sizes = spec.layer_sizes
    layers = [
        DenseLayer.initialize(sizes[i], sizes[i + 1], spec.activations[i], rng)
        for i in range(len(sizes) - 1)
    ]
    return EncoderModel(layers, spec)


@dataclass
class AutoencoderModel:
    """Encoder plus a mirrored decoder reconstructing the input space."""

    encoder: EncoderModel
    decoder: list

    def __post_init__(self):
        enc_sizes = self.encoder.spec.layer_sizes
        dec_sizes = tuple(reversed(enc_sizes))
        if len(self.decoder) != len(dec_sizes) - 1:
            raise ShapeMismatchError(
                f"decoder needs {len(dec_sizes) - 1} layers, got {len(self.decoder)}"
            )
        for i, layer in enumerate(self.decoder):
            if (layer.in_dim, layer.out_dim) != (dec_sizes[i], dec_sizes[i + 1]):
                raise ShapeMismatchError(
                    f"decoder layer {i} dims {(layer.in_dim, layer.out_dim)} do not mirror "
                    f"encoder sizes {enc_sizes}"
                )

    @property
    def all_layers(self):
        return list(self.encoder.layers) + list(self.decoder)

    def forward(self, x: np.ndarray):
        inputs = []
        caches = []
        h = as_matrix(x)
        for layer in self.all_layers:
            inputs.append(h)
            h, cache = layer.forward(h)
            caches.append(cache)
        return h, inputs, caches


def build_autoencoder(spec: EncoderSpec, rng: Rng) -> AutoencoderModel:
    """Encoder plus mirrored decoder, initialized in a fixed order."""
    encoder = build_encoder(spec, rng)
    dec_sizes = tuple(reversed(spec.layer_sizes))
    dec_acts = decoder_activations(spec.n_layers)
    decoder = [
        DenseLayer.initialize(dec_sizes[i], dec_sizes[i + 1], dec_acts[i], rng)
        for i in range(len(dec_sizes) - 1)
    ]
    return AutoencoderModel(encoder, decoder)


def encode(model: EncoderModel, data) -> np.ndarray:
    """Deterministic embedding of ``data`` rows (no corruption at inference)."""
    data = as_matrix(data)
    if data.shape[1] != model.spec.n_feat:
        raise ShapeMismatchError(
            f"data has {data.shape[1]} columns but the encoder expects {model.spec.n_feat}"
        )
    out, _, _ = model.forward(data)
    return out
