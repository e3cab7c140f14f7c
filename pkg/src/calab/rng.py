"""Deterministic substream derivation for order-independent parallel sampling.

Every random draw in the library comes from a substream addressed by a
master seed plus an integer index path (e.g. the initial-configuration
index, or a generation number).  Substreams are independent of evaluation
order, chunking, and worker count, so any parallel schedule reproduces the
single-threaded result bit for bit.
"""

from __future__ import annotations

import numpy as np


def substream(master_seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator for the given (master_seed, index path)."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(master_seed: int, *path: int) -> int:
    """Collapse a (master_seed, index path) to a plain u64 seed (loggable)."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
