import math

import numpy as np
import pytest

from scatter_dsm.augment import rotate_pi_grid, rotate_quarters_grid
from scatter_dsm.scenes import (
    CircleSpec,
    ContrastGrid,
    bilinear_upscale,
    digit_to_grid,
    make_austria,
    make_letters,
    pixel_centers,
    rasterize_circles,
    rotate_mask_nearest,
)


def test_pixel_centers_convention():
    c = pixel_centers(64)
    assert c[0] == -1.0 + 0.5 * (2.0 / 64)
    assert np.allclose(c[-1], 1.0 - 0.5 * (2.0 / 64))


def test_empty_circle_list_is_background():
    g = rasterize_circles([], 64)
    assert np.all(g.eps == 1.0)


def test_single_circle_geometry():
    g = rasterize_circles([CircleSpec((0.0, 0.0), 0.4, 2.0)], 64)
    assert g.eps[32, 32] == 2.0
    assert g.eps[0, 0] == 1.0
    assert g.eps.min() == 1.0  # background exactly one


def test_covered_pixel_count_tracks_area():
    # brute-force point-in-circle count vs pi r^2 / pixel area
    g = rasterize_circles([CircleSpec((0.0, 0.0), 0.4, 2.0)], 64)
    covered = int(np.sum(g.eps > 1.0))
    expected = math.pi * 0.4 ** 2 / (2.0 / 64) ** 2
    assert abs(covered - expected) / expected < 0.05


def test_last_circle_wins_on_overlap():
    a = CircleSpec((0.0, 0.0), 0.3, 1.5)
    b = CircleSpec((0.1, 0.0), 0.3, 1.9)
    g = rasterize_circles([a, b], 64)
    i, j = g.pixel_index((0.1, 0.0))
    assert g.eps[i, j] == 1.9
    g2 = rasterize_circles([b, a], 64)
    assert g2.eps[i, j] == 1.5


def test_rasterize_deterministic():
    circles = [CircleSpec((0.2, -0.1), 0.25, 1.7)]
    assert np.array_equal(rasterize_circles(circles, 64).eps,
                          rasterize_circles(circles, 64).eps)


def test_contrast_grid_invariants():
    with pytest.raises(ValueError):
        ContrastGrid(eps=np.full((8, 8), 0.5))
    with pytest.raises(ValueError):
        ContrastGrid(eps=np.ones((4, 6)))


@pytest.mark.parametrize("variant,left,right,ring", [
    ("circle-dataset", 2.0, 2.0, 2.0),
    ("mnist-1", 3.0, 3.0, 1.5),
    ("mnist-2", 1.5, 2.0, 2.5),
])
def test_austria_values(variant, left, right, ring):
    g = make_austria(variant)
    assert g.eps[g.pixel_index((-0.3, 0.6))] == left
    assert g.eps[g.pixel_index((0.3, 0.6))] == right
    assert g.eps[g.pixel_index((0.0, 0.25))] == ring      # inside the annulus
    assert g.eps[g.pixel_index((0.0, -0.2))] == 1.0       # annulus hole


def test_austria_variants_share_support():
    masks = [make_austria(v).eta > 0 for v in ("circle-dataset", "mnist-1", "mnist-2")]
    assert np.array_equal(masks[0], masks[1])
    assert np.array_equal(masks[0], masks[2])


def test_austria_unknown_variant():
    with pytest.raises(ValueError):
        make_austria("nope")


def test_letters_coverage_and_distinctness():
    letters = make_letters()
    assert len(letters) == 3
    masks = [g.eta > 0 for g in letters]
    for g, mask in zip(letters, masks):
        frac = mask.mean()
        assert 0.05 < frac < 0.30
        assert set(np.unique(g.eps)) == {1.0, 2.0}
        # outer two-pixel frame clear
        assert not mask[:2].any() and not mask[-2:].any()
        assert not mask[:, :2].any() and not mask[:, -2:].any()
    for a in range(3):
        for b in range(a + 1, 3):
            assert int(np.sum(masks[a] ^ masks[b])) > 100


def test_digit_all_zero_is_background():
    g = digit_to_grid(np.zeros((28, 28)))
    assert np.all(g.eps == 1.0)


def test_digit_all_ones_thresholds_everywhere():
    g = digit_to_grid(np.ones((28, 28)), eps_digit=2.0)
    assert np.all(g.eps == 2.0)


def test_digit_rotation_pi_is_exact_flip():
    rng = np.random.default_rng(5)
    img = rng.random((28, 28))
    plain = digit_to_grid(img, rot=0.0, eps_digit=2.0)
    rotated = digit_to_grid(img, rot=math.pi, eps_digit=2.0)
    assert np.array_equal(rotated.eps, rotate_pi_grid(plain.eps))


def test_digit_quarter_turns_commute_with_exact_rotations():
    rng = np.random.default_rng(6)
    img = rng.random((28, 28))
    base = digit_to_grid(img, rot=0.0, eps_digit=1.8)
    for quarters, rot in [(1, math.pi / 2), (2, math.pi), (3, 3 * math.pi / 2)]:
        direct = digit_to_grid(img, rot=rot, eps_digit=1.8)
        assert np.array_equal(direct.eps, rotate_quarters_grid(base.eps, quarters))


def test_digit_circle_overlays_digit():
    img = np.ones((28, 28))
    circ = CircleSpec((0.0, 0.0), 0.2, 2.4)
    g = digit_to_grid(img, circle=circ, eps_digit=1.5)
    assert g.eps[g.pixel_index((0.0, 0.0))] == 2.4
    assert g.eps[g.pixel_index((0.9, 0.9))] == 1.5


def test_digit_rejects_out_of_range_values():
    with pytest.raises(ValueError):
        digit_to_grid(np.full((28, 28), 1.5))


def test_bilinear_upscale_preserves_constants():
    assert np.all(bilinear_upscale(np.zeros((28, 28)), 64) == 0.0)
    assert np.allclose(bilinear_upscale(np.ones((28, 28)), 64), 1.0)


def test_rotate_mask_small_angle_keeps_interior():
    mask = np.zeros((64, 64), dtype=bool)
    mask[20:40, 20:40] = True
    rot = rotate_mask_nearest(mask, 0.3)
    assert abs(int(rot.sum()) - int(mask.sum())) < 40  # nearest-neighbor keeps area approx


def test_rasterize_rejects_tiny_grids():
    with pytest.raises(ValueError):
        rasterize_circles([], 4)


def test_circle_spec_validation():
    with pytest.raises(ValueError):
        CircleSpec((0.0, 0.0), -0.1, 1.5)
    with pytest.raises(ValueError):
        CircleSpec((0.0, 0.0), 0.1, 0.5)
