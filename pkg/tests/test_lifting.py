import numpy as np
import pytest

from helpers import images_equal, random_rgb

from rdls import (
    LiftingConsistencyError,
    ReconstructionError,
    RoleError,
    SlotChoice,
    plane_from_array,
    rgb_image,
)
from rdls.lifting import (
    Combine,
    LiftSequence,
    LiftStep,
    Mixer,
    apply_forward,
    apply_inverse,
    count_pixel_ops,
)
from rdls.transforms import difference_sequence, rct_sequence


def _identity_seq():
    return difference_sequence(SlotChoice("none"), SlotChoice("none"))


def test_identity_sequence_changes_nothing():
    rng = np.random.default_rng(0)
    img = random_rgb(rng, 7, 5)
    assert images_equal(apply_forward(img, _identity_seq()), img)
    assert images_equal(apply_inverse(img, _identity_seq()), img)


def test_single_difference_step():
    img = rgb_image(
        np.full((3, 3), 10), np.full((3, 3), 20), np.full((3, 3), 30)
    )
    seq = difference_sequence(SlotChoice("none"), SlotChoice("rdgdb"))
    out = apply_forward(img, seq)
    assert out.roles == ("R", "G", "Db")
    assert np.all(out.plane("Db").samples == -10)  # 20 - 30


def _window_mean_80_image():
    # G window around (1, 1) averages 80; B there is 75
    g = np.array(
        [
            [79, 80, 81, 50],
            [78, 80, 82, 50],
            [80, 80, 80, 50],
            [50, 50, 50, 50],
        ],
        dtype=np.int64,
    )
    r = np.full((4, 4), 90, dtype=np.int64)
    b = np.full((4, 4), 75, dtype=np.int64)
    return rgb_image(r, g, b)


def test_denoising_step_on_window_mean_example():
    img = _window_mean_80_image()
    seq = difference_sequence(SlotChoice("none"), SlotChoice("rdls", 1))
    out = apply_forward(img, seq)
    assert out.plane("dDb").samples[1, 1] == 5  # 80 - 75
    back = apply_inverse(out, seq)
    assert back.plane("B").samples[1, 1] == 75
    assert images_equal(back, img)


def test_round_trip_with_denoising_steps():
    rng = np.random.default_rng(1)
    for w_dg, w_db in ((1, 1), (1, 1024), (16, 4), (1024, 1)):
        seq = difference_sequence(SlotChoice("rdls", w_dg), SlotChoice("rdls", w_db))
        for _ in range(10):
            img = random_rgb(rng)
            assert images_equal(apply_inverse(apply_forward(img, seq), seq), img)


def test_forward_does_not_mutate_inputs():
    rng = np.random.default_rng(2)
    img = random_rgb(rng, 9, 9)
    copies = [p.samples.copy() for p in img.planes]
    seq = difference_sequence(SlotChoice("rdls", 2), SlotChoice("rdls", 2))
    apply_forward(img, seq)
    for p, c in zip(img.planes, copies):
        assert np.array_equal(p.samples, c)


def _pixel_by_pixel_rdgdb(img):
    r = img.plane("R").samples
    g = img.plane("G").samples
    b = img.plane("B").samples
    return r.copy(), r - g, g - b


def _pixel_by_pixel_rct(img):
    r = img.plane("R").samples
    g = img.plane("G").samples
    b = img.plane("B").samples
    cu = b - g
    cv = r - g
    y = g + (cu + cv) // 4
    return y, cu, cv


def test_step_by_step_equals_pixel_by_pixel_without_denoising():
    rng = np.random.default_rng(3)
    for _ in range(20):
        img = random_rgb(rng, int(rng.integers(1, 16)), int(rng.integers(1, 16)))

        seq = difference_sequence(SlotChoice("rdgdb"), SlotChoice("rdgdb"))
        out = apply_forward(img, seq)
        r, dg, db = _pixel_by_pixel_rdgdb(img)
        assert np.array_equal(out.plane("R").samples, r)
        assert np.array_equal(out.plane("Dg").samples, dg)
        assert np.array_equal(out.plane("Db").samples, db)

        out = apply_forward(img, rct_sequence())
        y, cu, cv = _pixel_by_pixel_rct(img)
        assert np.array_equal(out.plane("Y").samples, y)
        assert np.array_equal(out.plane("Cu").samples, cu)
        assert np.array_equal(out.plane("Cv").samples, cv)


def test_role_mismatch_is_rejected():
    rng = np.random.default_rng(4)
    img = random_rgb(rng, 4, 4)
    out = apply_forward(img, _difference_both())
    with pytest.raises(RoleError):
        apply_forward(out, _difference_both())


def _difference_both():
    return difference_sequence(SlotChoice("rdgdb"), SlotChoice("rdgdb"))


def test_wrong_bounds_declaration_is_an_internal_error():
    bad = LiftSequence(
        steps=(
            LiftStep(2, Combine.SUB_FROM, Mixer.select(1), (None, None),
                     "B", "Db", (0, 255), (0, 10)),
        ),
        input_roles=("R", "G", "B"),
    )
    img = rgb_image(np.full((2, 2), 0), np.full((2, 2), 200), np.full((2, 2), 0))
    with pytest.raises(LiftingConsistencyError):
        apply_forward(img, bad)


def test_invalid_inverse_input_is_a_reconstruction_error():
    dg = plane_from_array(np.zeros((2, 2), dtype=np.int64), -255, 255)
    db = plane_from_array(np.full((2, 2), 255), -255, 255)
    r = plane_from_array(np.zeros((2, 2), dtype=np.int64), 0, 255)
    from rdls import make_image

    img = make_image((r, dg, db), ("R", "Dg", "Db"))
    # G = R - Dg = 0, then B = G - Db = -255: out of [0, 255]
    with pytest.raises(ReconstructionError, match="not a valid"):
        apply_inverse(img, _difference_both())


def test_op_counter_counts_difference_steps():
    rng = np.random.default_rng(5)
    img = random_rgb(rng, 6, 6)
    with count_pixel_ops() as ops:
        apply_forward(img, _difference_both())
    assert ops.pixel_ops == 2
    with count_pixel_ops() as ops:
        apply_forward(img, rct_sequence())
    assert ops.pixel_ops == 7  # 2 negated adds (2 each), quarter-sum add (3)
