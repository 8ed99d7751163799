"""Counter-based random streams.

A stream is addressed by a path of non-negative integers, e.g. ``(seed, r)``
for replicate ``r``.  The path is hashed by :class:`numpy.random.SeedSequence`
into a Philox key, so stream ``r`` never depends on how many draws other
streams made or on the order in which they were created.
"""

import numpy as np

# path prefixes keeping unrelated consumers of one user seed apart
SWAP_MASKS = 0
SAMPLING = 1
BATTERY = 2


def substream(*path: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(p) for p in path])))


def derive_seed(*path: int) -> int:
    """A 63-bit integer seed determined by ``path``."""
    state = np.random.SeedSequence([int(p) for p in path]).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))
