"""Minimal dense neural-network engine: layers, losses, Adam, grad checks."""

from stratembed.nn.corrupt import gaussian_corrupt
from stratembed.nn.gradcheck import GradCheckReport, grad_check
from stratembed.nn.layers import ACTIVATIONS, DenseLayer
from stratembed.nn.losses import LOSS_KINDS, loss_and_grad
from stratembed.nn.optim import AdamState, adam_step

__all__ = [
    "ACTIVATIONS",
    "AdamState",
    "DenseLayer",
    "GradCheckReport",
    "LOSS_KINDS",
    "adam_step",
    "gaussian_corrupt",
    "grad_check",
    "loss_and_grad",
]
