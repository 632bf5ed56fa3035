"""Deterministic per-lattice-point random number generation.

Every random draw is a pure function of (seed, lattice linear index, slot),
so generated fields are independent of iteration order, worker count and
platform. The construction is two rounds of the SplitMix64 finalizer over
a linear combination of the inputs:

    x       = seed * P0 + index * P1 + slot * P2      (mod 2^64)
    value   = sm64(sm64(x))
    uniform = (value >> 11 + 1) * 2^-53               in (0, 1]

Complex Gaussians use the Box-Muller map z = sqrt(-ln u1) * exp(2 pi i u2),
giving E|z|^2 = 1.
"""

from __future__ import annotations

import numpy as np

_P0 = np.uint64(0x9E3779B97F4A7C15)
_P1 = np.uint64(0xBF58476D1CE4E5B9)
_P2 = np.uint64(0x94D049BB133111EB)
_M30 = np.uint64(0xBF58476D1CE4E5B9)
_M27 = np.uint64(0x94D049BB133111EB)


def _sm64(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z + _P0).astype(np.uint64)
        z = ((z ^ (z >> np.uint64(30))) * _M30).astype(np.uint64)
        z = ((z ^ (z >> np.uint64(27))) * _M27).astype(np.uint64)
        return z ^ (z >> np.uint64(31))


def raw_u64(seed: int, index, slot: int) -> np.ndarray:
    idx = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = (
            np.uint64(seed & 0xFFFFFFFFFFFFFFFF) * _P0
            + idx * _P1
            + np.uint64(slot) * _P2
        ).astype(np.uint64)
        return _sm64(_sm64(x))


def uniform(seed: int, index, slot: int) -> np.ndarray:
    """Uniform draws in (0, 1]."""
    v = raw_u64(seed, index, slot)
    return ((v >> np.uint64(11)).astype(np.float64) + 1.0) * (2.0**-53)


def complex_gaussian(seed: int, index) -> np.ndarray:
    """Standard complex Gaussians CN(0,1), one per index."""
    u1 = uniform(seed, index, 0)
    u2 = uniform(seed, index, 1)
    r = np.sqrt(-np.log(u1))
    th = 2.0 * np.pi * u2
    return r * (np.cos(th) + 1j * np.sin(th))


def derive_seed(seed: int, *tags: int) -> int:
    """Child seed for a tagged subtask (trial number, field slot, ...)."""
    out = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        for t in tags:
            out = _sm64(np.asarray(out * _P1 + np.uint64(t) * _P2, dtype=np.uint64))
    return int(out)
