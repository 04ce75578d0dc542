"""Architecture and schedule configuration.

Two activation conventions are supported and deliberately not reconciled:
the unsupervised baseline (DEC) keeps the first and final autoencoder layers
linear with relu in between, while DSEC applies relu at every encoder layer.
The decoder's reconstruction layer is linear in both conventions, since
z-scored targets take negative values.
"""

from dataclasses import dataclass, field, replace

from stratembed.errors import DomainError

PAPER_SCALE_SIZES = (13, 1000, 500, 3)
DESK_SCALE_SIZES = (13, 64, 32, 3)


def dec_activations(n_layers: int):
    """Encoder activations for the unsupervised convention: first layer linear."""
    return ("linear",) + ("relu",) * (n_layers - 1)


def dsec_activations(n_layers: int):
    """Encoder activations for the semi-supervised convention: relu throughout."""
    return ("relu",) * n_layers


def decoder_activations(n_layers: int):
    return ("relu",) * (n_layers - 1) + ("linear",)


@dataclass(frozen=True)
class EncoderSpec:
    """Layer widths [n_feat, hidden..., m] plus corruption and activations."""

    layer_sizes: tuple = DESK_SCALE_SIZES
    corruption_sigma: float = 0.1
    activations: tuple = None  # resolved per method when None

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        object.__setattr__(self, "layer_sizes", sizes)
        if len(sizes) < 3:
            raise DomainError("need at least one hidden layer between input and embedding")
        if any(s <= 0 for s in sizes):
            raise DomainError(f"layer sizes must be positive, got {sizes}")
        if sizes[-1] >= sizes[0]:
            raise DomainError(
                f"embedding dim {sizes[-1]} must be smaller than input dim {sizes[0]}"
            )
        if self.corruption_sigma < 0:
            raise DomainError(f"corruption_sigma must be >= 0, got {self.corruption_sigma}")
        if self.activations is not None:
            acts = tuple(self.activations)
            if len(acts) != self.n_layers:
                raise DomainError(
                    f"{self.n_layers} encoder layers need {self.n_layers} activations, "
                    f"got {len(acts)}"
                )
            object.__setattr__(self, "activations", acts)

    @property
    def n_feat(self) -> int:
        return self.layer_sizes[0]

    @property
    def embedding_dim(self) -> int:
        return self.layer_sizes[-1]

    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes) - 1

    def resolved(self, method: str) -> "EncoderSpec":
        """Fill in the activation convention for 'dec' or 'dsec'."""
        if self.activations is not None:
            return self
        if method == "dec":
            acts = dec_activations(self.n_layers)
        elif method == "dsec":
            acts = dsec_activations(self.n_layers)
        else:
            raise DomainError(f"unknown method {method!r}, expected 'dec' or 'dsec'")
        return replace(self, activations=acts)


@dataclass(frozen=True)
class TrainingSchedule:
    """Epoch counts per phase plus optimizer and batching hyperparameters."""

    pretrain_epochs: int = 50
    transfer_epochs: int = 10
    cluster_epochs: int = 200
    learning_rate: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    batch_size: int = 256  # None trains full-batch
    early_stop: bool = False
    early_stop_tol: float = 0.001  # fraction of hard assignments changing

    def __post_init__(self):
        for name in ("pretrain_epochs", "transfer_epochs", "cluster_epochs"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1")
        if self.batch_size is not None and self.batch_size < 1:
            raise DomainError("batch_size must be >= 1 or None for full batch")
