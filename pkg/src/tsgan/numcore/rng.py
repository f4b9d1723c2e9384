"""Seeded counter-based random streams.

Built on numpy's Philox bit generator, so an identical seed and draw sequence
yields bit-identical values across runs and platforms.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _key_to_int(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part)
    digest = hashlib.sha256(str(part).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


class RngStream:
    """Deterministic random source keyed by (seed, derivation key)."""

    def __init__(self, seed: int, key: tuple = ()):
        self.seed = int(seed)
        self.key = tuple(_key_to_int(k) for k in key)
        entropy = [self.seed & 0xFFFFFFFFFFFFFFFF, *self.key]
        self._gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))

    def child(self, *key_parts) -> "RngStream":
        """Derive an independent stream; same (seed, key parts) always gives the same stream."""
        return RngStream(self.seed, self.key + tuple(key_parts))

    def normal(self, shape, loc=0.0, scale=1.0) -> np.ndarray:
        return self._gen.normal(loc, scale, size=shape).astype(np.float64, copy=False)

    def uniform(self, low, high, shape) -> np.ndarray:
        return self._gen.uniform(low, high, size=shape).astype(np.float64, copy=False)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def integers(self, low, high, shape=None) -> np.ndarray:
        return self._gen.integers(low, high, size=shape)
