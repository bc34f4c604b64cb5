"""Deterministic random-stream derivation.

A master seed fans out into independent streams keyed by small integer
tuples (experiment tag, sweep index, replicate index, purpose). Results
therefore never depend on execution order or worker count, and an
alternate implementation can reproduce the replicate partitioning from
this scheme even without bit-identical generators.
"""

from __future__ import annotations

import numpy as np

__all__ = ["spawn_stream"]


def spawn_stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (master_seed, key...)."""
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(seq)
