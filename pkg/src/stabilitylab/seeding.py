"""Counter-based seeding: every random stream is a pure function of integer keys."""

import numpy as np


def hash64(*keys: int) -> int:
    """Mix integer keys into one 64-bit seed (order matters)."""
    ss = np.random.SeedSequence([int(k) & 0xFFFFFFFFFFFFFFFF for k in keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def substream(*keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(k) & 0xFFFFFFFFFFFFFFFF for k in keys]))
