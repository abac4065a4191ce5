"""Reproducible random-number substreams for parallel game generation.

Every simulated or synthesized game draws from its own counter-based
Philox stream keyed by (seed, game index), so corpora are bit-identical
for a fixed seed regardless of generation order or parallelism.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(seed: int, index: int) -> np.random.Generator:
    """Return the Philox generator for substream `index` of master `seed`."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
