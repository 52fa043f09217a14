"""Reconstruction quality metrics: relative L2, SSIM, total variation."""

from __future__ import annotations

import json

import numpy as np

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
DEFAULT_DYNAMIC_RANGE = 1.5   # contrast span of the hardest target family


def relative_l2(recon: np.ndarray, truth: np.ndarray) -> float:
    """||recon - truth||_2 / ||truth||_2 over all pixels."""
    recon = np.asarray(recon, float)
    truth = np.asarray(truth, float)
    if recon.shape != truth.shape:
        raise ValueError(f"shape mismatch {recon.shape} vs {truth.shape}")
    denom = np.linalg.norm(truth)
    if denom == 0:
        raise ValueError("relative_l2 undefined for an all-zero reference")
    return float(np.linalg.norm(recon - truth) / denom)


def _gaussian_taps(window: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    half = (window - 1) / 2.0
    x = np.arange(window) - half
    w = np.exp(-0.5 * (x / sigma) ** 2)
    return w / w.sum()


def _gauss_filter(img: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Separable Gaussian correlation with mirror (no edge repeat) padding."""
    half = len(taps) // 2
    out = img
    for axis in (0, 1):
        pad = [(0, 0), (0, 0)]
        pad[axis] = (half, half)
        p = np.pad(out, pad, mode="reflect")
        acc = np.zeros_like(out)
        for t, w in enumerate(taps):
            sl = [slice(None), slice(None)]
            sl[axis] = slice(t, t + out.shape[axis])
            acc += w * p[tuple(sl)]
        out = acc
    return out


def ssim(a: np.ndarray, b: np.ndarray, dynamic_range: float = DEFAULT_DYNAMIC_RANGE) -> float:
    """Mean structural similarity with the 11x11 / sigma 1.5 Gaussian window.

    Stabilisers C1 = (0.01 L)^2 and C2 = (0.03 L)^2 with L the dynamic
    range; borders are mirror-padded.  Symmetric in (a, b) and equal to 1
    exactly for identical images.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if dynamic_range <= 0:
        raise ValueError("dynamic range must be positive")
    c1 = (0.01 * dynamic_range) ** 2
    c2 = (0.03 * dynamic_range) ** 2
    taps = _gaussian_taps()
    mu_a = _gauss_filter(a, taps)
    mu_b = _gauss_filter(b, taps)
    var_a = _gauss_filter(a * a, taps) - mu_a * mu_a
    var_b = _gauss_filter(b * b, taps) - mu_b * mu_b
    cov = _gauss_filter(a * b, taps) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def total_variation(a: np.ndarray) -> float:
    """Anisotropic total variation normalised by the pixel count."""
    a = np.asarray(a, float)
    tv = np.sum(np.abs(np.diff(a, axis=0))) + np.sum(np.abs(np.diff(a, axis=1)))
    return float(tv / a.size)


def report_line(sample_id: int, delta: float, n_inc: int, rel: float, s: float,
                dynamic_range: float) -> str:
    """One JSON-lines evaluation record."""
    return json.dumps({
        "sample_id": int(sample_id),
        "delta": float(delta),
        "n_inc": int(n_inc),
        "rel_l2": float(rel),
        "ssim": float(s),
        "L": float(dynamic_range),
    })
