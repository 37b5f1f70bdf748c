"""Counter-based random streams for reproducible parallel trials.

Every (master_seed, trial_index, stream) triple names an independent SplitMix64
sequence.  The child state is derived by chaining the SplitMix64 finalizer

    h0 = 0
    h1 = mix64((h0 ^ master_seed)  + GAMMA)
    h2 = mix64((h1 ^ trial_index)  + GAMMA)
    h3 = mix64((h2 ^ stream)       + GAMMA)     # child seed

and the k-th raw word of the stream (k = 0, 1, ...) is
``mix64(child + (k + 1) * GAMMA)``.  Uniforms are ``((word >> 11) + 1) / 2**53``
in (0, 1]; normals pair consecutive uniforms (u1, u2) through Box-Muller,
emitting ``r cos(2 pi u2)`` then ``r sin(2 pi u2)`` with ``r = sqrt(-2 ln u1)``.
Since the whole construction is documented, another implementation can
reproduce it bit-for-bit on the integer side.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from ._kernels_py import GAMMA, MASK64, MIX1, MIX2

STREAM_MATRIX = 0
STREAM_RHS = 1
STREAM_OBJECTIVE = 2


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def child_seed(master_seed: int, trial_index: int, stream: int = STREAM_MATRIX) -> int:
    h = 0
    for v in (master_seed, trial_index, stream):
        h = mix64(((h ^ (int(v) & MASK64)) + GAMMA) & MASK64)
    return h


def gaussian_stream(master_seed: int, trial_index: int, count: int,
                    stream: int = STREAM_MATRIX) -> np.ndarray:
    """``count`` iid standard normals for one trial; identical inputs give identical bits."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    return kernels.normals(child_seed(master_seed, trial_index, stream), int(count))


def uniform_stream(master_seed: int, trial_index: int, count: int,
                   stream: int = STREAM_RHS) -> np.ndarray:
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    return kernels.uniforms(child_seed(master_seed, trial_index, stream), int(count))
