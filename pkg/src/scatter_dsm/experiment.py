"""Measurement geometry: wavenumber, incidences, receivers, aperture."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

DEFAULT_WAVELENGTH = 0.75
DEFAULT_K = 2.0 * math.pi / DEFAULT_WAVELENGTH
FULL_APERTURE = (0.0, 2.0 * math.pi)
HALF_APERTURE = (0.0, math.pi)

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ExperimentConfig:
    """Plane-wave incidences and receivers on an arc of the measurement circle.

    Receivers sit at angles  aperture_start + r * (aperture length) / n_rec,
    r = 0 .. n_rec-1: equispaced periodic nodes for the full circle, and the
    half-open-arc convention for partial apertures.  Incidence directions are
    d_p = (cos th_p, sin th_p) with th_p = 2 pi p / n_inc.
    """

    k: float = DEFAULT_K
    n_inc: int = 4
    n_rec: int = 32
    r_meas: float = 3.0
    aperture: tuple[float, float] = FULL_APERTURE

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError(f"wavenumber must be positive, got {self.k}")
        if self.n_inc < 1 or self.n_rec < 1:
            raise ValueError("need at least one incidence and one receiver")
        if self.r_meas <= _SQRT2:
            raise ValueError(
                f"measurement radius {self.r_meas} must exceed sqrt(2) so the "
                "circle lies strictly outside the sampling square")
        length = self.aperture[1] - self.aperture[0]
        if not (0.0 < length <= 2.0 * math.pi + 1e-12):
            raise ValueError(f"invalid aperture {self.aperture}")

    @property
    def aperture_length(self) -> float:
        return self.aperture[1] - self.aperture[0]

    @property
    def full_aperture(self) -> bool:
        return abs(self.aperture_length - 2.0 * math.pi) < 1e-12

    @property
    def quad_weight(self) -> float:
        """Arc-length quadrature weight |S| / n_rec for receiver sums."""
        return self.aperture_length * self.r_meas / self.n_rec

    def receiver_angles(self) -> np.ndarray:
        return self.aperture[0] + np.arange(self.n_rec) * (self.aperture_length / self.n_rec)

    def receiver_points(self) -> np.ndarray:
        th = self.receiver_angles()
        return self.r_meas * np.column_stack([np.cos(th), np.sin(th)])

    def inc_angles(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_inc) / self.n_inc

    def inc_dirs(self) -> np.ndarray:
        th = self.inc_angles()
        return np.column_stack([np.cos(th), np.sin(th)])

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)
