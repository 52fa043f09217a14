"""Independent brute-force oracles used to pin expected values in the tests.

Everything here is written against the defining formulas, deliberately
sharing no code with the package:

* defining power series for J0/Y0/J1/Y1, summed in ``decimal`` arithmetic
  with enough digits to absorb the cancellation (terms peak near e^{2z},
  so the working precision grows with z and the oracle stays valid on the
  whole [0, 500] contract range, not just where doubles survive);
* bisection root finding on those series;
* the first Born approximation of the scattered field (direct quadrature);
* the separation-of-variables series for a penetrable circular cylinder.

The cylinder series needs J/Y/H of higher integer orders; those come from
the package's recurrences, which are themselves validated against the
series oracle and the Wronskian identity before any solver test runs.
"""

from __future__ import annotations

import cmath
import math
from decimal import Decimal, localcontext

EULER_GAMMA = 0.5772156649015328606

_GAMMA_D = Decimal("0.57721566490153286060651209008240243104215933593992359880576723488487")
_PI_D = Decimal("3.14159265358979323846264338327950288419716939937510582097494459230781")


def _series_prec(z: float) -> int:
    # The alternating series cancels down from terms of size ~e^{2z}.
    return int(0.87 * z) + 45


def j0_series(z: float) -> float:
    """J0 by its power series, summed far past machine tolerance."""
    with localcontext() as ctx:
        ctx.prec = _series_prec(z)
        zd = Decimal(z)
        q = -(zd * zd) / 4
        term, total = Decimal(1), Decimal(1)
        m = 1
        while True:
            term *= q / (m * m)
            total += term
            if abs(term) < Decimal("1e-30") and m > 0.55 * z:
                break
            m += 1
        return float(total)


def y0_series(z: float) -> float:
    """Y0 by its power series with the Euler-Mascheroni log term."""
    with localcontext() as ctx:
        ctx.prec = _series_prec(z)
        zd = Decimal(z)
        q = (zd * zd) / 4
        term, total = Decimal(1), Decimal(0)
        harmonic = Decimal(0)
        m = 1
        while True:
            term *= q / (m * m)
            harmonic += Decimal(1) / m
            total += (-1) ** (m + 1) * harmonic * term
            if abs(term) < Decimal("1e-30") and m > 0.55 * z:
                break
            m += 1
        log_part = ((zd / 2).ln() + _GAMMA_D) * Decimal(j0_series(z))
        return float((2 / _PI_D) * (log_part + total))


def j1_series(z: float) -> float:
    with localcontext() as ctx:
        ctx.prec = _series_prec(z)
        zd = Decimal(z)
        q = -(zd * zd) / 4
        term, total = Decimal(1), Decimal(1)
        m = 1
        while True:
            term *= q / (m * (m + 1))
            total += term
            if abs(term) < Decimal("1e-30") and m > 0.55 * z:
                break
            m += 1
        return float(zd / 2 * total)


def y1_series(z: float) -> float:
    with localcontext() as ctx:
        ctx.prec = _series_prec(z)
        zd = Decimal(z)
        q = (zd * zd) / 4
        term = zd / 2
        psi_sum = -2 * _GAMMA_D + 1
        total = psi_sum * term
        m = 1
        while True:
            term *= -q / (m * (m + 1))
            psi_sum += Decimal(1) / m + Decimal(1) / (m + 1)
            total += psi_sum * term
            if abs(term) < Decimal("1e-30") and m > 0.55 * z:
                break
            m += 1
        log_part = 2 / _PI_D * (zd / 2).ln() * Decimal(j1_series(z))
        return float(log_part - 2 / (_PI_D * zd) - total / _PI_D)


def jn_series(n: int, z: float) -> float:
    """J_n by its power series, for validating the recurrence paths."""
    with localcontext() as ctx:
        ctx.prec = _series_prec(z) + n
        zd = Decimal(z)
        q = -(zd * zd) / 4
        term = (zd / 2) ** n / math.factorial(n)
        total = term
        m = 1
        while True:
            term *= q / (m * (m + n))
            total += term
            if abs(term) < Decimal("1e-30") and m > 0.55 * z:
                break
            m += 1
        return float(total)


def bisect_root(f, lo: float, hi: float, iters: int = 200) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise ValueError("no sign change on bracket")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) * flo <= 0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)


def born_scattered(grid, cfg, p: int) -> "np.ndarray":
    """First Born approximation at the receivers: k^2 sum G(x_r, y_c) eta_c uinc_c A.

    Direct quadrature over support pixels; no linear solve, so self terms
    and the system matrix of the production solver never enter.
    """
    import numpy as np

    from scatter_dsm.specfun import green_2d

    k = cfg.k
    d = cfg.inc_dirs()[p]
    cells = np.argwhere(grid.eta > 0)
    area = grid.cell_area
    xs = grid.coords
    out = np.zeros(cfg.n_rec, dtype=complex)
    for r, xr in enumerate(cfg.receiver_points()):
        acc = 0.0 + 0.0j
        for i, j in cells:
            yc = (xs[i], xs[j])
            uinc = cmath.exp(1j * k * (d[0] * yc[0] + d[1] * yc[1]))
            acc += green_2d(xr, yc, k) * grid.eta[i, j] * uinc * area
        out[r] = k * k * acc
    return out


def mie_scattered(radius: float, eps_r: float, k: float, points, inc_angle: float = 0.0,
                  max_order: int = 25) -> "np.ndarray":
    """Scattered field of a centered penetrable cylinder at exterior points.

    Plane-wave incidence exp(i k x.d), d at angle ``inc_angle``.  Interior
    wavenumber k1 = k sqrt(eps_r); coefficients from continuity of u and
    du/dr at r = radius:

        b_m = i^m [k1 J'_m(k1 a) J_m(k a) - k J_m(k1 a) J'_m(k a)]
                / [k J_m(k1 a) H'_m(k a) - k1 J'_m(k1 a) H_m(k a)]

        u_s(r, phi) = sum_m b_m H_m^(1)(k r) e^{i m (phi - inc_angle)}
    """
    import numpy as np

    from scatter_dsm.specfun import besselj_n, hankel1_n

    k1 = k * math.sqrt(eps_r)
    ka, k1a = k * radius, k1 * radius

    def jd(n, z):
        # J'_n(z) = J_{n-1}(z) - (n/z) J_n(z), with J_{-1} = -J_1
        jm1 = -besselj_n(1, z) if n == 0 else besselj_n(n - 1, z)
        return jm1 - (n / z) * besselj_n(n, z)

    def hd(n, z):
        hm1 = -hankel1_n(1, z) if n == 0 else hankel1_n(n - 1, z)
        return hm1 - (n / z) * hankel1_n(n, z)

    coeffs = {}
    for m in range(0, max_order + 1):
        num = k1 * jd(m, k1a) * besselj_n(m, ka) - k * besselj_n(m, k1a) * jd(m, ka)
        den = k * besselj_n(m, k1a) * hd(m, ka) - k1 * jd(m, k1a) * hankel1_n(m, ka)
        coeffs[m] = (1j ** m) * num / den

    pts = np.asarray(points, dtype=float)
    out = np.zeros(len(pts), dtype=complex)
    for idx, (x, y) in enumerate(pts):
        r = math.hypot(x, y)
        phi = math.atan2(y, x) - inc_angle
        acc = coeffs[0] * hankel1_n(0, k * r)
        for m in range(1, max_order + 1):
            # +m and -m terms: b_{-m} = b_m and H_{-m} = (-1)^m H_m
            acc += coeffs[m] * hankel1_n(m, k * r) * 2.0 * math.cos(m * phi)
        out[idx] = acc
    return out
