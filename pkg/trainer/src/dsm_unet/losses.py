"""Training loss: pixel MSE + smoothed total variation + SSIM, both branches.

For a batch pair (pred, truth) and its half-turn twin (pred_rot, truth_rot):

    Loss = 1/2 [ mse(pred, truth) + a1 TV_s(pred) + a2 (1 - SSIM(pred, truth))
               + mse(pred_rot, truth_rot) + a1 TV_s(pred_rot)
               + a2 (1 - SSIM(pred_rot, truth_rot)) ]

mse is the per-pixel mean (resolution independent), TV_s replaces |g| by
sqrt(g^2 + 1e-8) for differentiability and is normalised by the pixel
count, and SSIM uses the same 11x11 Gaussian window (sigma 1.5), reflect
padding and stabilisers C1 = (0.01 L)^2, C2 = (0.03 L)^2 as the evaluation
metrics (L = 1.5).
"""

from __future__ import annotations

import torch
import torch.nn.functional as F

TV_EPS = 1e-8
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
DYNAMIC_RANGE = 1.5


def _gaussian_window(dtype, device) -> torch.Tensor:
    half = (SSIM_WINDOW - 1) / 2.0
    x = torch.arange(SSIM_WINDOW, dtype=dtype, device=device) - half
    w = torch.exp(-0.5 * (x / SSIM_SIGMA) ** 2)
    w = w / w.sum()
    return (w[:, None] * w[None, :]).view(1, 1, SSIM_WINDOW, SSIM_WINDOW)


def _filter(img: torch.Tensor, window: torch.Tensor) -> torch.Tensor:
    pad = SSIM_WINDOW // 2
    padded = F.pad(img, (pad, pad, pad, pad), mode="reflect")
    return F.conv2d(padded, window)


def ssim(a: torch.Tensor, b: torch.Tensor,
         dynamic_range: float = DYNAMIC_RANGE) -> torch.Tensor:
    """Mean SSIM over a (B, 1, H, W) batch; differentiable."""
    c1 = (0.01 * dynamic_range) ** 2
    c2 = (0.03 * dynamic_range) ** 2
    window = _gaussian_window(a.dtype, a.device)
    mu_a = _filter(a, window)
    mu_b = _filter(b, window)
    var_a = _filter(a * a, window) - mu_a * mu_a
    var_b = _filter(b * b, window) - mu_b * mu_b
    cov = _filter(a * b, window) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2)
    return (num / den).mean()


def tv_smooth(img: torch.Tensor) -> torch.Tensor:
    """Smoothed anisotropic total variation per pixel, averaged over the batch."""
    dx = img[..., 1:, :] - img[..., :-1, :]
    dy = img[..., :, 1:] - img[..., :, :-1]
    total = torch.sqrt(dx * dx + TV_EPS).sum(dim=(-3, -2, -1)) \
        + torch.sqrt(dy * dy + TV_EPS).sum(dim=(-3, -2, -1))
    pixels = img.shape[-1] * img.shape[-2]
    return (total / pixels).mean()


def _branch(pred, truth, alpha1, alpha2):
    mse = F.mse_loss(pred, truth)
    return mse + alpha1 * tv_smooth(pred) + alpha2 * (1.0 - ssim(pred, truth))


def reconstruction_loss(pred, truth, pred_rot=None, truth_rot=None,
                        alpha1: float = 0.01, alpha2: float = 0.05) -> torch.Tensor:
    """The full two-branch loss; pass no rotated pair to train unaugmented."""
    loss = _branch(pred, truth, alpha1, alpha2)
    if pred_rot is not None:
        loss = loss + _branch(pred_rot, truth_rot, alpha1, alpha2)
    return 0.5 * loss
