"""Deterministic random streams.

Every random quantity is drawn from a numpy ``Generator`` backed by PCG64.
A stream is identified by a master seed plus a tuple of keys (case index,
grid cell, ...). The 64-bit stream seed is the first 8 bytes of
``sha256("master:key1:key2...")``, so any task can rebuild its own stream
without knowing the scheduling order of the other tasks.
"""

import hashlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def derive_seed(master: int, *keys) -> int:
    """Derive a 64-bit seed from a master seed and stream keys."""
    data_str = ":".join(str(part) for part in (int(master) & SEED_MASK, *keys))
    hash_obj = hashlib.sha256(data_str.encode("utf-8"))
    return int.from_bytes(hash_obj.digest()[:8], "little")


def stream(master: int, *keys) -> np.random.Generator:
    """Build the generator for the stream identified by (master, keys)."""
    return np.random.Generator(np.random.PCG64(derive_seed(master, *keys)))
