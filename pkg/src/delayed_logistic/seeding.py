"""Seed derivation and generator construction.

Every random stream in the package is a NumPy ``Philox`` (4x64, 10 rounds)
counter-based generator keyed by a 64-bit seed. Replica seeds are derived
statelessly with the SplitMix64 finalizer::

    z = (master + (index + 1) * 0x9E3779B97F4A7C15) mod 2**64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

The finalizer is a bijection on 64-bit words and the golden-ratio increment
is odd, so distinct indices below 2**64 never collide for a fixed master.
"""

import numpy as np

RNG_ALGORITHM = "numpy.random.Philox"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def derive_seed(master, index):
    """Mix ``(master, index)`` into a new 64-bit seed."""
    z = (int(master) + (int(index) + 1) * _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_seeds(master, indices):
    """Vectorised :func:`derive_seed` over an integer array (uint64 result)."""
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(int(master) & _MASK) + (idx + np.uint64(1)) * np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def replica_seed(master, N, index):
    """Seed of replica ``index`` at scaling parameter ``N``.

    Mixing ``N`` in first means adding values of N to a sweep leaves the
    streams of the existing points untouched.
    """
    return derive_seed(derive_seed(master, N), index)


def make_rng(seed):
    return np.random.Generator(np.random.Philox(int(seed)))
