"""Half-turn and mirror pairs on torch tensors, by index permutation only.

Tensor layout is (..., n_inc, n, n) with the spatial axes [x, y] (y grows
with the last index).  Rotating the medium by pi rotates every map by pi
and shifts the channel that produced it by n_inc/2; mirroring about the
first incidence direction flips the y axis of the single channel.
"""

from __future__ import annotations

import torch


def rotate_pi_image(img: torch.Tensor) -> torch.Tensor:
    """180-degree rotation of the two trailing spatial axes."""
    return torch.flip(img, dims=(-2, -1))


def mirror_image(img: torch.Tensor) -> torch.Tensor:
    """Reflection about the x axis (flip the y axis)."""
    return torch.flip(img, dims=(-1,))


def rotate_pi_pair(tensor: torch.Tensor) -> torch.Tensor:
    """Input tensor of the half-turned medium, by channel + pixel permutation.

    For n_inc = 1 the mirror identity stands in (the rotation identity
    needs an even channel count).
    """
    n_inc = tensor.shape[-3]
    if n_inc == 1:
        return mirror_image(tensor)
    if n_inc % 2:
        raise ValueError("half-turn channel permutation needs an even incidence count")
    rolled = torch.roll(tensor, shifts=n_inc // 2, dims=-3)
    return rotate_pi_image(rolled)
