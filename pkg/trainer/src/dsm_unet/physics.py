"""Measurement-side physics the trainer must replay from containers.

Two things have to match the data-generation toolkit bit for bit or to
floating-point accuracy:

* noise replay -- noisy fields are regenerated from clean ones with seeds
  mixed from (sample_id, delta, incidence) through SplitMix64, normals
  drawn from a PCG64 uniform stream via Box-Muller, and per-entry scale
  delta * ||us||_2 / sqrt(2 N_r);
* index maps -- Phi(x) = |sum_r us_r conj(G(x, y_r)) w| with
  w = (aperture length) * R / N_r and G the outgoing 2D Helmholtz kernel
  (i/4) H0^(1)(k |x - y|).

Receiver angles are aperture_start + r * length / n_rec, matching the
container header geometry.
"""

from __future__ import annotations

import numpy as np
from scipy.special import hankel1

from .scat import Header

_MASK64 = (1 << 64) - 1
NOISE_SALT = 0x5CA77E12D05E11CE


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _mix(*words: int) -> int:
    acc = 0
    for w in words:
        acc = _splitmix64((acc ^ (w & _MASK64)) & _MASK64)
    return acc


def noise_seed(sample_id: int, delta: float, incidence: int) -> int:
    dbits = int(np.float64(delta).view(np.uint64))
    return _mix(NOISE_SALT, sample_id, dbits, incidence)


def _normal_pairs(seed: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(seed))
    u1 = 1.0 - rng.random(count)
    u2 = rng.random(count)
    r = np.sqrt(-2.0 * np.log(u1))
    return r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)


def replay_noise(clean_us: np.ndarray, sample_id: int, delta: float) -> np.ndarray:
    """Noisy (n_inc, n_rec) fields identical to the generator's output."""
    if delta == 0.0:
        return clean_us.copy()
    n_inc, n_rec = clean_us.shape
    out = np.empty_like(clean_us)
    for p in range(n_inc):
        us = clean_us[p]
        scale = delta * np.linalg.norm(us) / np.sqrt(2.0 * n_rec)
        zr, zi = _normal_pairs(noise_seed(sample_id, delta, p), n_rec)
        out[p] = us + scale * (zr + 1j * zi)
    return out


def receiver_points(header: Header) -> np.ndarray:
    length = header.aperture[1] - header.aperture[0]
    th = header.aperture[0] + np.arange(header.n_rec) * (length / header.n_rec)
    return header.r_meas * np.column_stack([np.cos(th), np.sin(th)])


def pixel_centers(n: int) -> np.ndarray:
    return -1.0 + (np.arange(n) + 0.5) * (2.0 / n)


def green_matrix(header: Header) -> np.ndarray:
    """(n*n, n_rec) kernel G(x_ij, y_r) at the pixel centers."""
    c = pixel_centers(header.n)
    pix = np.column_stack([np.repeat(c, header.n), np.tile(c, header.n)])
    rec = receiver_points(header)
    dist = np.sqrt(((pix[:, None, :] - rec[None, :, :]) ** 2).sum(-1))
    return 0.25j * hankel1(0, header.k * dist)


def quad_weight(header: Header) -> float:
    length = header.aperture[1] - header.aperture[0]
    return length * header.r_meas / header.n_rec


def index_tensor(us: np.ndarray, header: Header,
                 green: np.ndarray | None = None) -> np.ndarray:
    """(n_inc, n, n) index maps for stored (n_inc, n_rec) field samples."""
    if green is None:
        green = green_matrix(header)
    w = quad_weight(header)
    phi = np.abs(green.conj() @ us.T) * w       # (n*n, n_inc)
    return phi.T.reshape(us.shape[0], header.n, header.n)
