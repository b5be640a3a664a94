import numpy as np
import pytest

from rdls import FILTER_WEIGHTS, FilterSpec, constant_plane, plane_equal, plane_from_array
from rdls.denoise import denoise_plane, denoise_plane_all_weights


def test_constant_plane_is_fixed_point_for_every_weight():
    p = constant_plane(5, 4, 7)
    for w in FILTER_WEIGHTS:
        assert plane_equal(denoise_plane(p, FilterSpec(w)), p)


def test_interior_window_mean_80():
    # 3x3 window around (1, 1) sums to 720, mean 80
    g = np.array(
        [
            [79, 80, 81, 0],
            [78, 80, 82, 0],
            [80, 80, 80, 0],
            [0, 0, 0, 0],
        ],
        dtype=np.int64,
    )
    out = denoise_plane(plane_from_array(g, 0, 255), FilterSpec(1))
    assert out.samples[1, 1] == 80


def test_corner_window_shrinks_to_four_pixels():
    p = plane_from_array(np.array([[10, 20], [30, 40]]), 0, 255)
    out = denoise_plane(p, FilterSpec(1))
    # every window covers the whole 2x2: round(100 / 4) = 25
    assert out.samples.tolist() == [[25, 25], [25, 25]]


def test_weighted_center():
    a = np.zeros((3, 3), dtype=np.int64)
    a[1, 1] = 100
    out = denoise_plane(plane_from_array(a, 0, 255), FilterSpec(8))
    assert out.samples[1, 1] == 50  # round(800 / 16)


def test_all_weights_values_for_isolated_center():
    a = np.zeros((3, 3), dtype=np.int64)
    a[1, 1] = 100
    outs = denoise_plane_all_weights(plane_from_array(a, 0, 255))
    centers = {w: int(out.samples[1, 1]) for w, out in zip(FILTER_WEIGHTS, outs)}
    assert centers[1] == 11  # round(100 / 9)
    assert centers[8] == 50
    assert centers[1024] == 99  # round(102400 / 1032)


def test_all_weights_matches_individual_calls():
    rng = np.random.default_rng(3)
    for lo, hi in ((0, 255), (-255, 255)):
        for _ in range(10):
            h, w = rng.integers(1, 20, 2)
            p = plane_from_array(rng.integers(lo, hi + 1, (h, w)), lo, hi)
            outs = denoise_plane_all_weights(p)
            assert len(outs) == 11
            for weight, out in zip(FILTER_WEIGHTS, outs):
                assert plane_equal(out, denoise_plane(p, FilterSpec(weight)))


def test_weakest_filter_moves_samples_at_most_two():
    rng = np.random.default_rng(4)
    spec = FilterSpec(1024)
    for _ in range(30):
        h, w = rng.integers(1, 32, 2)
        p = plane_from_array(rng.integers(0, 256, (h, w)), 0, 255)
        out = denoise_plane(p, spec)
        assert int(np.abs(out.samples - p.samples).max()) <= 2


def test_rounding_ties_away_from_zero_both_signs():
    pos = plane_from_array(np.array([[3, 3], [2, 2]]), 0, 255)
    assert denoise_plane(pos, FilterSpec(1)).samples.tolist() == [[3, 3], [3, 3]]
    neg = plane_from_array(np.array([[-3, -3], [-2, -2]]), -255, 255)
    assert denoise_plane(neg, FilterSpec(1)).samples.tolist() == [[-3, -3], [-3, -3]]


def test_deterministic_and_pure():
    rng = np.random.default_rng(6)
    arr = rng.integers(0, 256, (9, 13))
    p = plane_from_array(arr, 0, 255)
    a = denoise_plane(p, FilterSpec(2))
    b = denoise_plane(p, FilterSpec(2))
    assert plane_equal(a, b)
    assert np.array_equal(p.samples, arr)  # input untouched


def test_output_bounds_equal_input_bounds():
    rng = np.random.default_rng(7)
    p = plane_from_array(rng.integers(-200, 100, (8, 8)), -255, 255)
    out = denoise_plane(p, FilterSpec(4))
    assert (out.min_value, out.max_value) == (-255, 255)
    assert out.samples.min() >= -255 and out.samples.max() <= 255


def test_rejects_planes_outside_filter_domain():
    p = plane_from_array(np.array([[600]]), 0, 600)
    with pytest.raises(ValueError, match="bounds"):
        denoise_plane(p, FilterSpec(1))
