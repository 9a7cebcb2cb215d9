"""Counter-style random streams keyed by integer tuples."""

import numpy as np

# first key component separates the consumers of a user seed
PROJECTION = 0
GENERATOR = 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """A Philox generator determined only by ``seed`` and ``key``."""
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))
