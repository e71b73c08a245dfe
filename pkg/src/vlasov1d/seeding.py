"""Deterministic stream derivation from a single base seed.

All randomness in the package flows from one integer seed through named
sub-streams, using numpy's SeedSequence spawn keys on top of the Philox
counter-based generator.  The same (seed, key) pair always yields the
same stream, independently of execution order.
"""

import numpy as np

__all__ = ["derive_rng"]


def derive_rng(seed, *key):
    """Generator for the sub-stream identified by the integer tuple ``key``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
