"""Seed derivation.

Every random draw in the package comes from a PCG64 stream whose seed is
derived from a root seed plus a tuple of string/int keys, e.g.
``(root, "german", "wgan", "fold", 3)``.  Keys are hashed with CRC-32 so the
mapping is stable across processes and platforms, and the resulting stream does
not depend on the order in which tasks are scheduled.
"""

import zlib

import numpy as np


def _key_to_int(key):
    if isinstance(key, (bool, np.bool_)):
        return int(key)
    if isinstance(key, (int, np.integer)):
        return int(key) & 0xFFFFFFFFFFFFFFFF
    return zlib.crc32(str(key).encode("utf-8"))


def derive_seed(root, *keys):
    """Return a 64-bit integer seed derived from ``root`` and ``keys``."""
    ss = np.random.SeedSequence([_key_to_int(root)] + [_key_to_int(k) for k in keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(root, *keys):
    """PCG64 generator seeded from ``derive_seed(root, *keys)``."""
    return np.random.Generator(np.random.PCG64(derive_seed(root, *keys)))


def as_rng(random_state):
    """Coerce ``None``/int/Generator into a ``numpy.random.Generator``."""
    if isinstance(random_state, np.random.Generator):
        return random_state
    if random_state is None:
        random_state = 0
    return np.random.Generator(np.random.PCG64(int(random_state)))
