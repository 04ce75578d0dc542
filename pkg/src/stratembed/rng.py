"""Seeded random number generation.

Every stochastic component in the package draws from an :class:`Rng`, a thin
wrapper around numpy's PCG64 generator. Reproducibility contract: the same
seed yields the same stream on a given platform, and all pipeline randomness
is derived from one root seed via :meth:`Rng.derive`, which hashes a stage
label (sha256) into a child seed. The derivation is order-independent:
``Rng(s).derive("a")`` does not depend on whether ``derive("b")`` was called
first.
"""

import hashlib

import numpy as np

__all__ = ["Rng"]


def _label_to_offset(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class Rng:
    """Deterministic generator (PCG64) with labelled substream derivation."""

    algorithm = "numpy PCG64 via np.random.Generator"

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def derive(self, label: str) -> "Rng":
        """Child generator for a named stage, independent of call order."""
        return Rng((self.seed ^ _label_to_offset(label)) % (2**63))

    # Draw methods delegate to the underlying generator; each call advances
    # the stream state.

    def normal(self, loc=0.0, scale=1.0, size=None) -> np.ndarray:
        return self._gen.normal(loc, scale, size)

    def uniform(self, low=0.0, high=1.0, size=None) -> np.ndarray:
        return self._gen.uniform(low, high, size)

    def integers(self, low, high=None, size=None) -> np.ndarray:
        return self._gen.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def choice_index(self, cumulative_weights: np.ndarray) -> int:
        """Sample an index proportional to weights given their cumulative sum."""
        total = cumulative_weights[-1]
        u = self._gen.uniform(0.0, total)
        return int(np.searchsorted(cumulative_weights, u, side="right").clip(0, len(cumulative_weights) - 1))
