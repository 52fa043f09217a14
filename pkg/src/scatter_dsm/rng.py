"""Seeded randomness: 64-bit seed mixing and Box-Muller Gaussian draws.

All stochastic behaviour in this package flows through two primitives:

* ``splitmix64`` -- the seed mixer.  Per-sample seeds, per-noise seeds and
  any other derived seeds are obtained by folding 64-bit words through it,
  so every artifact is reproducible from one master seed.
* ``normal_pairs`` -- standard normal variates generated from a
  ``numpy.random.PCG64`` uniform stream via the Box-Muller transform.

Pinning the generator (PCG64) and the transform (Box-Muller) makes noisy
fields bit-reproducible within this codebase, including across the
training-side reimplementation that must replay identical noise.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Salt folded into noise seeds so field noise streams never collide with
# scene-sampling streams derived from the same sample id.
NOISE_SALT = 0x5CA77E12D05E11CE


def splitmix64(x: int) -> int:
    """One SplitMix64 mixing step; maps u64 -> u64 with good avalanche."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix(*words: int) -> int:
    """Fold any number of 64-bit words into a single derived seed."""
    acc = 0
    for w in words:
        acc = splitmix64((acc ^ (w & _MASK64)) & _MASK64)
    return acc


def sample_seed(master_seed: int, sample_id: int) -> int:
    """Per-sample seed used for scene sampling and clean-data generation."""
    return mix(master_seed, sample_id)


def noise_seed(sample_id: int, delta: float, incidence: int = 0) -> int:
    """Seed for measurement noise at level ``delta`` on one incidence record.

    Derived from (sample_id, delta, incidence, fixed salt) only, so any
    component holding the clean fields regenerates identical noisy fields.
    """
    dbits = int(np.float64(delta).view(np.uint64))
    return mix(NOISE_SALT, sample_id, dbits, incidence)


def uniform_rng(seed: int) -> np.random.Generator:
    """The package-wide uniform generator (PCG64) for a derived seed."""
    return np.random.Generator(np.random.PCG64(seed))


def normal_pairs(seed: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Two arrays of ``count`` i.i.d. standard normals via Box-Muller.

    Uses u1 in (0, 1] (never 0, so log is finite) and u2 in [0, 1):

        z1 = sqrt(-2 ln u1) cos(2 pi u2)
        z2 = sqrt(-2 ln u1) sin(2 pi u2)
    """
    rng = uniform_rng(seed)
    u1 = 1.0 - rng.random(count)
    u2 = rng.random(count)
    r = np.sqrt(-2.0 * np.log(u1))
    return r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)
