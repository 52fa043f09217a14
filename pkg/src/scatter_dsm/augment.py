"""Exact rotation/mirror augmentation of (contrast, index-tensor) pairs.

Rotating a medium by phi_j = 2 pi j / N_i (the incidence spacing) rotates
each index map and shifts which incidence produced it:

    Phi(x; R_{phi_j} eps, d_i) = R_{phi_j} Phi(x; eps, d_{i-j})

so the tensor of the rotated medium is a channel permutation plus a pixel
permutation of the original -- no new forward solves, and no interpolation.
Similarly, mirroring about the single incidence direction d_1 = (1, 0)
mirrors the single index map.

All array transforms here are index permutations.  Grid rotations are only
allowed when phi_j is a multiple of 90 degrees (pixel-exact on the square
raster); anything else raises rather than resampling, because resampling
would silently break the identity the trainer relies on.

Axis convention (shared with the scene module): arrays are [i, j] with
axis 0 = x, axis 1 = y increasing with j.
"""

from __future__ import annotations

import numpy as np

from .dsm import IndexTensor
from .scenes import ContrastGrid


def rotate_pi_grid(g: np.ndarray) -> np.ndarray:
    """Exact 180-degree rotation about the grid center: out[i,j] = in[n-1-i, n-1-j]."""
    return np.ascontiguousarray(g[::-1, ::-1])


def mirror_d1_grid(g: np.ndarray) -> np.ndarray:
    """Exact reflection about the x axis: out[i,j] = in[i, n-1-j]."""
    return np.ascontiguousarray(g[:, ::-1])


def rotate_quarters_grid(g: np.ndarray, quarters: int) -> np.ndarray:
    """Exact rotation by quarters * 90 degrees counterclockwise."""
    out = g
    for _ in range(quarters % 4):
        # 90 degrees: out[i, j] = in[j, n-1-i]
        out = np.flip(out.T, axis=0)
    return np.ascontiguousarray(out)


def _quarters_for(j: int, n_inc: int) -> int:
    if (4 * j) % n_inc != 0:
        raise ValueError(
            f"rotation by 2 pi * {j}/{n_inc} is not pixel-exact on the raster; "
            "only multiples of 90 degrees are permitted (no interpolation)")
    return (4 * j) // n_inc


def augment_pair_rotation(grid: ContrastGrid, tensor: IndexTensor,
                          j: int) -> tuple[ContrastGrid, IndexTensor]:
    """Rotate a sample by 2 pi j / N_i via the channel-permutation identity.

    New channel i holds the rotated old channel (i - j) mod N_i.  Requires
    equispaced incidence directions and a pixel-exact angle.
    """
    n_inc = tensor.n_inc
    j = j % n_inc
    quarters = _quarters_for(j, n_inc)
    new_eps = rotate_quarters_grid(grid.eps, quarters)
    new_data = np.empty_like(tensor.data)
    for i in range(n_inc):
        new_data[i] = rotate_quarters_grid(tensor.data[(i - j) % n_inc], quarters)
    return (ContrastGrid(eps=new_eps, extent=grid.extent),
            IndexTensor(data=new_data, scale_c=tensor.scale_c))


def augment_pair_mirror(grid: ContrastGrid,
                        tensor: IndexTensor) -> tuple[ContrastGrid, IndexTensor]:
    """Mirror a single-incidence sample about the incidence axis d_1 = (1, 0)."""
    if tensor.n_inc != 1:
        raise ValueError(
            f"mirror augmentation is defined for a single incidence, got {tensor.n_inc}")
    new_eps = mirror_d1_grid(grid.eps)
    new_data = mirror_d1_grid(tensor.data[0])[None, :, :]
    return (ContrastGrid(eps=new_eps, extent=grid.extent),
            IndexTensor(data=new_data, scale_c=tensor.scale_c))


def rotate_pi_tensor(tensor: IndexTensor) -> IndexTensor:
    """The 180-degree pair used by the training loss: channels shifted by N_i/2.

    For N_i = 1 this is the mirror pair instead (the rotation identity needs
    an even incidence count to stay exact).
    """
    if tensor.n_inc == 1:
        data = mirror_d1_grid(tensor.data[0])[None, :, :]
        return IndexTensor(data=data, scale_c=tensor.scale_c)
    if tensor.n_inc % 2:
        raise ValueError("pi rotation by channel permutation needs an even incidence count")
    j = tensor.n_inc // 2
    new_data = np.empty_like(tensor.data)
    for i in range(tensor.n_inc):
        new_data[i] = rotate_pi_grid(tensor.data[(i - j) % tensor.n_inc])
    return IndexTensor(data=new_data, scale_c=tensor.scale_c)
