"""Stable derivation of independent RNG streams from one global seed.

Every randomized stage derives its own stream by hashing the global seed
together with a stage name and any distinguishing indices. Streams are
therefore independent of each other and of execution order, which keeps
parallel and serial runs byte-identical.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(*parts: object) -> int:
    """Hash heterogeneous parts into a stable 64-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(str(part).encode("utf-8"))
        h.update(b"\x00")
    return int.from_bytes(h.digest(), "little")


def derive_rng(*parts: object) -> np.random.Generator:
    """Independent numpy Generator keyed by the given parts."""
    return np.random.default_rng(derive_seed(*parts))
