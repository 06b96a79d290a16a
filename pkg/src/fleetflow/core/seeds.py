"""Seed tree for reproducible runs.

Child seeds are derived by hashing ``(master, label, index)``; adding
scenarios or stages never perturbs the streams that already exist.
"""

import hashlib

import numpy as np


SEED_BITS = 63


def derive_seed(master: int, label: str, index: int = 0) -> int:
    """Derive a child seed from the master seed, a purpose label and an index."""
    payload = f"{int(master)}:{label}:{int(index)}".encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "big") & ((1 << SEED_BITS) - 1)


def derive_rng(master: int, label: str, index: int = 0) -> np.random.Generator:
    """Return a numpy Generator seeded from :func:`derive_seed`."""
    return np.random.default_rng(derive_seed(master, label, index))
