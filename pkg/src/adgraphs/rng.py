"""Seeded random streams.

Every sampled computation draws from ``stream(seed, *labels)``: numpy's PCG64
generator seeded through a SeedSequence built from the run seed and a stable
hash of the labels.  Streams for different labels are independent, and the
same (seed, labels) always yields the same numbers.
"""

from __future__ import annotations

import zlib

import numpy as np

DEFAULT_SEED = 0xC0FFEE


def _label_key(label) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label) & 0xFFFFFFFF
    return zlib.crc32(str(label).encode())


def stream(seed: int, *labels) -> np.random.Generator:
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [_label_key(x) for x in labels]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
