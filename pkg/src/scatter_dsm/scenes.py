"""Scatterer scene construction on the pixel raster.

The sampling region is the square [-extent, extent]^2 discretised into
n x n pixels with centers  x_i = -extent + (i + 0.5) * (2 extent / n).
Arrays are indexed [i, j] with axis 0 = x and axis 1 = y, y increasing
with j.  This axis convention is shared by the index-function and
augmentation modules; the 180-degree rotation and x-axis mirror used for
augmentation are exact index permutations under it.

Relative permittivity is 1.0 in the background and >= 1.0 on scatterers;
the contrast is eta = eps - 1 >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .letters import LETTER_MASKS

DEFAULT_N = 64


@dataclass(frozen=True)
class CircleSpec:
    """A homogeneous disc scatterer."""

    center: tuple[float, float]
    radius: float
    permittivity: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")
        if self.permittivity < 1.0:
            raise ValueError(f"permittivity below background: {self.permittivity}")


@dataclass
class ContrastGrid:
    """Relative permittivity field on the pixel raster over the sampling square."""

    eps: np.ndarray
    extent: float = 1.0

    def __post_init__(self):
        self.eps = np.ascontiguousarray(self.eps, dtype=np.float64)
        if self.eps.ndim != 2 or self.eps.shape[0] != self.eps.shape[1]:
            raise ValueError(f"eps must be square, got shape {self.eps.shape}")
        if self.eps.min() < 1.0:
            raise ValueError(f"eps must be >= 1 everywhere, min = {self.eps.min()}")

    @property
    def n(self) -> int:
        return self.eps.shape[0]

    @property
    def eta(self) -> np.ndarray:
        """Contrast eps - 1 (>= 0)."""
        return self.eps - 1.0

    @property
    def coords(self) -> np.ndarray:
        """Pixel-center coordinate values shared by both axes."""
        return pixel_centers(self.n, self.extent)

    @property
    def cell_area(self) -> float:
        h = 2.0 * self.extent / self.n
        return h * h

    def pixel_index(self, point) -> tuple[int, int]:
        """Indices of the pixel whose cell contains ``point``."""
        h = 2.0 * self.extent / self.n
        i = min(self.n - 1, max(0, int((point[0] + self.extent) / h)))
        j = min(self.n - 1, max(0, int((point[1] + self.extent) / h)))
        return i, j

    def with_eps(self, eps: np.ndarray) -> "ContrastGrid":
        return ContrastGrid(eps=eps, extent=self.extent)


def pixel_centers(n: int, extent: float = 1.0) -> np.ndarray:
    h = 2.0 * extent / n
    return -extent + (np.arange(n) + 0.5) * h


def rasterize_circles(circles, n: int = DEFAULT_N, extent: float = 1.0) -> ContrastGrid:
    """Paint discs onto an all-background grid, later circles overwriting earlier.

    A pixel takes the permittivity of the last listed circle covering its
    center; circles extending beyond the square are silently clipped.
    """
    if n < 8:
        raise ValueError(f"grid resolution too small: {n}")
    c = pixel_centers(n, extent)
    xx = c[:, None]
    yy = c[None, :]
    eps = np.ones((n, n))
    for spec in circles:
        inside = (xx - spec.center[0]) ** 2 + (yy - spec.center[1]) ** 2 <= spec.radius ** 2
        eps[inside] = spec.permittivity
    return ContrastGrid(eps=eps, extent=extent)


# "Austria" benchmark: two discs over an annulus.  The geometry is frozen
# here; the three variants differ only in permittivity values.
_AUSTRIA_DISCS = ((-0.3, 0.6), (0.3, 0.6))
_AUSTRIA_DISC_RADIUS = 0.2
_AUSTRIA_RING_CENTER = (0.0, -0.2)
_AUSTRIA_RING_OUTER = 0.6
_AUSTRIA_RING_INNER = 0.3

_AUSTRIA_VALUES = {
    # (left disc, right disc, ring)
    "circle-dataset": (2.0, 2.0, 2.0),
    "mnist-1": (3.0, 3.0, 1.5),
    "mnist-2": (1.5, 2.0, 2.5),
}


def make_austria(variant: str, n: int = DEFAULT_N) -> ContrastGrid:
    """The two-discs-plus-annulus benchmark profile, per named variant."""
    try:
        left, right, ring = _AUSTRIA_VALUES[variant]
    except KeyError:
        raise ValueError(f"unknown austria variant {variant!r}; "
                         f"one of {sorted(_AUSTRIA_VALUES)}") from None
    c = pixel_centers(n)
    xx, yy = c[:, None], c[None, :]
    eps = np.ones((n, n))
    rr = np.hypot(xx - _AUSTRIA_RING_CENTER[0], yy - _AUSTRIA_RING_CENTER[1])
    eps[(rr >= _AUSTRIA_RING_INNER) & (rr <= _AUSTRIA_RING_OUTER)] = ring
    for center, value in zip(_AUSTRIA_DISCS, (left, right)):
        inside = (xx - center[0]) ** 2 + (yy - center[1]) ** 2 <= _AUSTRIA_DISC_RADIUS ** 2
        eps[inside] = value
    return ContrastGrid(eps=eps)


LETTER_PERMITTIVITY = 2.0


def make_letters() -> list[ContrastGrid]:
    """Binary-contrast letter targets D, S, M from the bundled raster masks."""
    out = []
    for name in ("D", "S", "M"):
        mask = LETTER_MASKS[name]
        eps = np.where(mask, LETTER_PERMITTIVITY, 1.0)
        out.append(ContrastGrid(eps=eps))
    return out


def bilinear_upscale(img: np.ndarray, out_n: int) -> np.ndarray:
    """Bilinear resampling with the half-pixel-center convention."""
    in_n = img.shape[0]
    src = (np.arange(out_n) + 0.5) * in_n / out_n - 0.5
    src = np.clip(src, 0.0, in_n - 1.0)
    lo = np.floor(src).astype(int)
    hi = np.minimum(lo + 1, in_n - 1)
    w = src - lo
    rows = img[lo][:, lo] * (1 - w)[:, None] * (1 - w)[None, :] \
        + img[hi][:, lo] * w[:, None] * (1 - w)[None, :] \
        + img[lo][:, hi] * (1 - w)[:, None] * w[None, :] \
        + img[hi][:, hi] * w[:, None] * w[None, :]
    return rows


def rotate_mask_nearest(mask: np.ndarray, rot: float) -> np.ndarray:
    """Rotate a boolean mask about the grid center, nearest-neighbor.

    Pixels whose source point falls outside the raster become background.
    Multiples of 90 degrees land exactly on pixel centers, so those
    rotations are pure index permutations.
    """
    n = mask.shape[0]
    if rot == 0.0:
        return mask.copy()
    centers = np.arange(n) + 0.5  # index-space pixel centers
    xx = centers[:, None] - n / 2.0
    yy = centers[None, :] - n / 2.0
    c, s = math.cos(rot), math.sin(rot)
    # source point of each output pixel: rotate backwards
    xs = c * xx + s * yy + n / 2.0
    ys = -s * xx + c * yy + n / 2.0
    i_src = np.rint(xs - 0.5).astype(int)
    j_src = np.rint(ys - 0.5).astype(int)
    valid = (i_src >= 0) & (i_src < n) & (j_src >= 0) & (j_src < n)
    out = np.zeros_like(mask)
    out[valid] = mask[i_src[valid], j_src[valid]]
    return out


def digit_to_grid(img: np.ndarray, rot: float = 0.0, circle: CircleSpec | None = None,
                  eps_digit: float = 2.0, n: int = DEFAULT_N) -> ContrastGrid:
    """Turn a grayscale digit image into a binary-contrast scene.

    Upscales 28 -> n bilinearly, thresholds at 0.5, rotates the mask by
    ``rot`` (nearest-neighbor), paints the mask at ``eps_digit`` and then
    overlays the optional circle (circle wins on overlap).
    """
    img = np.asarray(img, dtype=float)
    if img.min() < 0.0 or img.max() > 1.0:
        raise ValueError("digit pixel values must lie in [0, 1]")
    up = bilinear_upscale(img, n)
    mask = up >= 0.5
    mask = rotate_mask_nearest(mask, rot)
    eps = np.where(mask, eps_digit, 1.0)
    if circle is not None:
        c = pixel_centers(n)
        xx, yy = c[:, None], c[None, :]
        inside = (xx - circle.center[0]) ** 2 + (yy - circle.center[1]) ** 2 <= circle.radius ** 2
        eps[inside] = circle.permittivity
    return ContrastGrid(eps=eps)
