import math

import numpy as np
import pytest

from scatter_dsm import specfun as sf

import oracles as orc

# Frozen from the decimal series oracle (see oracles.py); the derived tests
# below also recompute them at test time so drift cannot hide.
J0_AT_1 = 0.7651976865579666
Y0_AT_1 = 0.0882569642156769
FIRST_J0_ROOT = 2.404825557695773
FIRST_Y0_ROOT = 0.8935769662791675


def test_j0_at_zero_exact():
    assert sf.bessel_j0(0.0) == 1.0


def test_j0_reference_value():
    assert abs(orc.j0_series(1.0) - J0_AT_1) < 1e-15
    assert abs(sf.bessel_j0(1.0) - J0_AT_1) < 1e-12


def test_j0_first_root():
    root = orc.bisect_root(orc.j0_series, 2.0, 3.0)
    assert abs(root - FIRST_J0_ROOT) < 1e-12
    assert abs(sf.bessel_j0(FIRST_J0_ROOT)) <= 1e-9


def test_y0_reference_value():
    assert abs(orc.y0_series(1.0) - Y0_AT_1) < 1e-15
    assert abs(sf.bessel_y0(1.0) - Y0_AT_1) < 1e-12


def test_y0_first_root():
    root = orc.bisect_root(orc.y0_series, 0.5, 1.5)
    assert abs(root - FIRST_Y0_ROOT) < 1e-12
    assert abs(sf.bessel_y0(FIRST_Y0_ROOT)) <= 1e-9


def test_y0_log_divergence():
    # (2/pi) ln(z/2) dominates near zero
    assert sf.bessel_y0(1e-6) < -8.0


@pytest.mark.parametrize("fn", [sf.bessel_y0, sf.bessel_y1, sf.hankel1_0, sf.hankel1_1])
def test_domain_error_nonpositive(fn):
    with pytest.raises(ValueError):
        fn(0.0)
    with pytest.raises(ValueError):
        fn(-1.0)


def test_domain_error_negative_j():
    with pytest.raises(ValueError):
        sf.bessel_j0(-0.5)
    with pytest.raises(ValueError):
        sf.bessel_j1(-0.5)


def test_series_oracle_equivalence():
    # production J0/Y0 track the brute-force series oracle on [1e-3, 30]
    zs = np.geomspace(1e-3, 30.0, 120)
    for z in zs:
        assert abs(sf.bessel_j0(z) - orc.j0_series(z)) <= 1e-9
        assert abs(sf.bessel_y0(z) - orc.y0_series(z)) <= 1e-9
        assert abs(sf.bessel_j1(z) - orc.j1_series(z)) <= 1e-9
        assert abs(sf.bessel_y1(z) - orc.y1_series(z)) <= 1e-9


def test_large_argument_branch_against_oracle():
    # spot checks over the asymptotic branch up to the [0, 500] contract edge
    for z in [12.5, 20.0, 50.0, 123.4, 250.0, 500.0]:
        assert abs(sf.bessel_j0(z) - orc.j0_series(z)) <= 1e-9
        assert abs(sf.bessel_y0(z) - orc.y0_series(z)) <= 1e-9


def test_wronskian_identity():
    rng = np.random.default_rng(7)
    zs = rng.uniform(0.1, 100.0, 1000)
    for z in zs:
        w = sf.bessel_j1(z) * sf.bessel_y0(z) - sf.bessel_j0(z) * sf.bessel_y1(z)
        assert abs(w - 2.0 / (np.pi * z)) <= 1e-8


def test_finite_on_domain():
    zs = np.geomspace(1e-8, 500.0, 400)
    for z in zs:
        assert math.isfinite(sf.bessel_j0(z))
        assert math.isfinite(sf.bessel_y0(z))
        h = sf.hankel1_0(z)
        assert math.isfinite(h.real) and math.isfinite(h.imag)


def test_hankel_composition():
    h = sf.hankel1_0(1.0)
    assert h.real == sf.bessel_j0(1.0)
    assert h.imag == sf.bessel_y0(1.0)  # exact by definition


def test_hankel_asymptotic_magnitude():
    z = 50.0
    expected = math.sqrt(2.0 / (math.pi * z))
    assert abs(abs(sf.hankel1_0(z)) - expected) / expected < 0.01


def test_vec_matches_scalar():
    zs = np.array([0.05, 1.0, 7.7, 11.99, 12.01, 40.0, 300.0])
    hv = sf.hankel1_0_vec(zs)
    for z, h in zip(zs, hv):
        assert h == sf.hankel1_0(z)


def test_higher_orders_against_series():
    for n in [2, 3, 5, 8, 13, 25, 40]:
        for z in [0.3, 2.5, 7.0, 24.9]:
            ref = orc.jn_series(n, z)
            assert abs(sf.besselj_n(n, z) - ref) <= 1e-9 * max(1.0, abs(ref))


def test_higher_order_wronskian():
    # J_{n+1} Y_n - J_n Y_{n+1} = 2/(pi z) validates the Y recurrence too
    for n in [1, 2, 5, 10, 20, 30]:
        for z in [0.5, 3.0, 12.0, 25.0]:
            w = sf.besselj_n(n + 1, z) * sf.bessely_n(n, z) \
                - sf.besselj_n(n, z) * sf.bessely_n(n + 1, z)
            assert abs(w - 2.0 / (np.pi * z)) <= 1e-8


# --- Green's functions ---

GREEN_AT_KD1 = 0.25j * complex(J0_AT_1, Y0_AT_1)  # (i/4) H0(1)


def test_green_2d_reference():
    # k |x-y| = 1
    g = sf.green_2d((0.0, 0.0), (1.0, 0.0), 1.0)
    assert abs(g - GREEN_AT_KD1) < 1e-12
    assert abs(g - complex(-0.0220642, 0.1912994)) < 1e-6


def test_green_2d_reciprocity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = rng.uniform(-1, 1, 2)
        y = rng.uniform(-1, 1, 2)
        if np.allclose(x, y):
            continue
        assert sf.green_2d(x, y, 8.0) == sf.green_2d(y, x, 8.0)


def test_green_2d_scale_equivalence():
    # depends on k d only
    a = sf.green_2d((0.0, 0.0), (0.8, 0.0), 2.0)
    b = sf.green_2d((0.0, 0.0), (0.4, 0.0), 4.0)
    assert a == b


def test_green_2d_singularity():
    with pytest.raises(ValueError):
        sf.green_2d((0.3, 0.2), (0.3, 0.2), 8.0)


def test_green_far_reference():
    k = 2.0 * np.pi / 0.75
    g = sf.green_far_2d((0.0, 0.0), (1.0, 0.0), k)
    assert abs(abs(g) - 0.068917) < 1e-5
    assert abs(np.angle(g) - np.pi / 4.0) < 1e-12


def test_green_far_magnitude_independent_of_x():
    k = 2.0 * np.pi / 0.75
    rng = np.random.default_rng(11)
    ref = abs(sf.green_far_2d((0.0, 0.0), (0.0, 1.0), k))
    for _ in range(20):
        x = rng.uniform(-1, 1, 2)
        th = rng.uniform(0, 2 * np.pi)
        g = sf.green_far_2d(x, (np.cos(th), np.sin(th)), k)
        assert abs(abs(g) - ref) < 1e-14


def test_green_far_phase_flip():
    k = 4.0
    x = (np.pi / k, 0.0)
    g0 = sf.green_far_2d((0.0, 0.0), (1.0, 0.0), k)
    g1 = sf.green_far_2d(x, (1.0, 0.0), k)
    assert abs(g1 + g0) < 1e-12  # e^{-i pi} = -1


def test_green_far_unit_direction_required():
    with pytest.raises(ValueError):
        sf.green_far_2d((0.0, 0.0), (1.0, 1.0), 8.0)
