"""Direct-sampling index functions and their diagnostics.

The index function of a scattered-field record is the modulus of its
L2(S) inner product with the Green's function anchored at each probe
pixel,

    Phi(x) = | sum_r us[r] conj(G(x, y_r)) w |,     w = |S| / N_r,

with the trapezoid weight exact for equispaced nodes on the circle.  The
same sum over a partial arc gives the limited-aperture variant, and the
far-field variant replaces G by its far-field kernel with weight
2 pi / n_far.  Normalised forms divide by the product of the factor norms
(both with the same weight), so they live in [0, 1] by Cauchy-Schwarz.

Inner-product convention: <f, g> = Int f conj(g); the modulus makes the
choice invisible here but it is fixed for good measure.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass

import numpy as np

from .experiment import ExperimentConfig
from .forward import FieldRecord, far_directions, far_field, scattered_at_receivers, solve_forward
from .scenes import ContrastGrid, pixel_centers
from .specfun import green_far_2d_vec, hankel1_0_vec


@dataclass
class IndexTensor:
    """Stacked index maps, one channel per incidence (the network input)."""

    data: np.ndarray          # (n_inc, n, n) real, >= 0
    scale_c: float = 0.0      # dataset-wide scaling constant (0 = unscaled)

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.float64)
        if self.data.ndim != 3 or self.data.shape[1] != self.data.shape[2]:
            raise ValueError(f"tensor must be (n_inc, n, n), got {self.data.shape}")
        if self.data.min() < 0:
            raise ValueError("index values are moduli and cannot be negative")

    @property
    def n_inc(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]


@lru_cache(maxsize=16)
def receiver_green_matrix(cfg: ExperimentConfig, n: int) -> np.ndarray:
    """G(x_ij, y_r) for all pixel centers against all receivers -> (n*n, N_r).

    Cached per configuration (the matrix is reused for every sample of a
    dataset); treat the returned array as read-only.
    """
    c = pixel_centers(n)
    pix = np.column_stack([np.repeat(c, n), np.tile(c, n)])
    rec = cfg.receiver_points()
    diff = pix[:, None, :] - rec[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    g = 0.25j * hankel1_0_vec(cfg.k * dist)
    g.setflags(write=False)
    return g


def _index_from_green(us: np.ndarray, green: np.ndarray, w: float, n: int) -> np.ndarray:
    phi = np.abs(green.conj() @ us) * w
    return phi.reshape(n, n)


def index_near(rec: FieldRecord, cfg: ExperimentConfig, n: int,
               green: np.ndarray | None = None) -> np.ndarray:
    """Full-aperture index map at the n x n pixel centers."""
    if not cfg.full_aperture:
        raise ValueError("index_near expects the full measurement circle; "
                         "use index_limited for partial apertures")
    if green is None:
        green = receiver_green_matrix(cfg, n)
    return _index_from_green(rec.us, green, cfg.quad_weight, n)


def index_limited(rec: FieldRecord, cfg: ExperimentConfig, n: int,
                  green: np.ndarray | None = None) -> np.ndarray:
    """Limited-aperture index map (receivers on a sub-arc of the circle)."""
    if cfg.full_aperture:
        raise ValueError("index_limited expects a partial aperture")
    if green is None:
        green = receiver_green_matrix(cfg, n)
    return _index_from_green(rec.us, green, cfg.quad_weight, n)


def index_map(rec: FieldRecord, cfg: ExperimentConfig, n: int,
              green: np.ndarray | None = None) -> np.ndarray:
    """Aperture-agnostic dispatch of the near-field index sum."""
    if green is None:
        green = receiver_green_matrix(cfg, n)
    return _index_from_green(rec.us, green, cfg.quad_weight, n)


def index_near_normalized(rec: FieldRecord, cfg: ExperimentConfig, n: int,
                          green: np.ndarray | None = None) -> np.ndarray:
    """Index map divided by ||us|| ||G(x,.)|| (weighted norms); values in [0, 1]."""
    if green is None:
        green = receiver_green_matrix(cfg, n)
    w = cfg.quad_weight
    us_norm = math.sqrt(float(np.sum(np.abs(rec.us) ** 2)) * w)
    if us_norm == 0.0:
        raise ValueError("cannot normalise a zero field record")
    g_norm = np.sqrt(np.sum(np.abs(green) ** 2, axis=1) * w)
    phi = np.abs(green.conj() @ rec.us) * w
    return (phi / (us_norm * g_norm)).reshape(n, n)


def index_far(uinf: np.ndarray, dirs: np.ndarray, cfg: ExperimentConfig,
              n: int) -> np.ndarray:
    """Far-field index map from far-field samples at unit directions."""
    if len(dirs) < 1:
        raise ValueError("need at least one far-field direction")
    c = pixel_centers(n)
    pix = np.column_stack([np.repeat(c, n), np.tile(c, n)])
    kern = green_far_2d_vec(pix, np.asarray(dirs, float), cfg.k)
    w = 2.0 * math.pi / len(dirs)
    return (np.abs(kern.conj() @ uinf) * w).reshape(n, n)


def index_far_normalized(uinf: np.ndarray, dirs: np.ndarray, cfg: ExperimentConfig,
                         n: int) -> np.ndarray:
    """Normalised far-field index map; bounded by 1 by Cauchy-Schwarz."""
    c = pixel_centers(n)
    pix = np.column_stack([np.repeat(c, n), np.tile(c, n)])
    kern = green_far_2d_vec(pix, np.asarray(dirs, float), cfg.k)
    w = 2.0 * math.pi / len(dirs)
    u_norm = math.sqrt(float(np.sum(np.abs(uinf) ** 2)) * w)
    if u_norm == 0.0:
        raise ValueError("cannot normalise a zero far-field record")
    g_norm = np.sqrt(np.sum(np.abs(kern) ** 2, axis=1) * w)
    return (np.abs(kern.conj() @ uinf) * w / (u_norm * g_norm)).reshape(n, n)


def compute_index_tensor(records: list[FieldRecord], cfg: ExperimentConfig,
                         n: int) -> IndexTensor:
    """Stack per-incidence index maps in incidence order (the Eq.-27 layout)."""
    if len(records) != cfg.n_inc:
        raise ValueError(f"expected {cfg.n_inc} records, got {len(records)}")
    green = receiver_green_matrix(cfg, n)
    data = np.stack([index_map(r, cfg, n, green=green) for r in
                     sorted(records, key=lambda r: r.incidence)])
    return IndexTensor(data=data)


def scale_tensor(t: IndexTensor, c: float) -> IndexTensor:
    """Multiply all entries by 2/C and record C."""
    if c <= 0:
        raise ValueError(f"scale constant must be positive, got {c}")
    return IndexTensor(data=t.data * (2.0 / c), scale_c=c)


def convergence_check(grid: ContrastGrid, cfg: ExperimentConfig, radii,
                      probe_n: int = 64, n_far: int | None = None) -> list[tuple[float, float]]:
    """Deviation of the finite-radius index map from its far-field limit.

    For each measurement radius R computes

        s(R) = max_x | Phi^R(x) / c_med - Phi^inf(x) | / max_x Phi^inf

    where c_med is the median of Phi^R / Phi^inf over the probe pixels (an
    empirical estimate of the dimension constant relating the two limits).
    Returns [(R, s(R)), ...]; s decays like O(1/R).
    """
    radii = list(radii)
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    if n_far is None:
        n_far = cfg.n_rec
    solved = solve_forward(grid, cfg, 0)
    uinf = far_field(solved, grid, cfg, n_far)
    phi_inf = index_far(uinf, far_directions(n_far), cfg, probe_n)
    peak = phi_inf.max()
    if peak == 0.0:
        raise ValueError("far-field index map vanishes; nothing to compare")
    out = []
    for r in radii:
        cfg_r = cfg.with_(r_meas=float(r))
        rec = scattered_at_receivers(solved, grid, cfg_r)
        phi_r = index_map(rec, cfg_r, probe_n)
        positive = phi_inf > 0
        c_med = float(np.median(phi_r[positive] / phi_inf[positive]))
        s = float(np.max(np.abs(phi_r / c_med - phi_inf)) / peak)
        out.append((float(r), s))
    return out


def injectivity_rank(cfg: ExperimentConfig, n: int) -> tuple[float, float]:
    """Smallest and largest singular values of the discretised probe operator.

    The operator maps receiver data to the probe-grid field via the matrix
    A[ij, r] = conj(G(x_ij, y_r)) w; a strictly positive smallest singular
    value is the desk-scale witness of injectivity.
    """
    if cfg.n_rec > n * n:
        raise ValueError("probe grid must not be coarser than the receiver count")
    a = receiver_green_matrix(cfg, n).conj() * cfg.quad_weight
    sing = np.linalg.svd(a, compute_uv=False)
    return float(sing[-1]), float(sing[0])
