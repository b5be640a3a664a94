import numpy as np
import pytest

from helpers import images_equal, random_rgb

from rdls import (
    FormatError,
    RoleError,
    SlotChoice,
    TransformDescriptor,
    plane_equal,
    plane_from_array,
    rgb_image,
)
from rdls.imageio import (
    add_awgn,
    bayer_rggb_to_rgb,
    make_correlated_scene,
    read_pgm,
    read_planar,
    read_ppm,
    reduce3x,
    write_pgm,
    write_planar,
    write_ppm,
)
from rdls.transforms import apply_descriptor


def test_ppm_write_read_is_byte_identical(tmp_path):
    rng = np.random.default_rng(60)
    img = random_rgb(rng, 13, 7)
    path = tmp_path / "a.ppm"
    write_ppm(img, path)
    first = path.read_bytes()
    again = tmp_path / "b.ppm"
    write_ppm(read_ppm(path), again)
    assert again.read_bytes() == first


def test_ppm_single_pixel(tmp_path):
    path = tmp_path / "one.ppm"
    path.write_bytes(b"P6\n1 1\n255\n" + bytes([1, 2, 3]))
    img = read_ppm(path)
    assert [int(p.samples[0, 0]) for p in img.planes] == [1, 2, 3]
    assert img.roles == ("R", "G", "B")


def test_ppm_header_comments_are_skipped(tmp_path):
    path = tmp_path / "c.ppm"
    path.write_bytes(b"P6\n# made by hand\n2 1\n# another\n255\n" + bytes(6))
    img = read_ppm(path)
    assert img.width == 2 and img.height == 1


def test_ppm_rejects_wide_maxval(tmp_path):
    path = tmp_path / "w.ppm"
    path.write_bytes(b"P6\n1 1\n65535\n" + bytes(6))
    with pytest.raises(FormatError, match="maxval"):
        read_ppm(path)


def test_ppm_rejects_truncation_and_bad_magic(tmp_path):
    path = tmp_path / "t.ppm"
    path.write_bytes(b"P6\n2 2\n255\n" + bytes(5))
    with pytest.raises(FormatError, match="truncated"):
        read_ppm(path)
    path.write_bytes(b"P5\n2 2\n255\n" + bytes(4))
    with pytest.raises(FormatError):
        read_ppm(path)


def test_ppm_write_requires_rgb_roles(tmp_path):
    rng = np.random.default_rng(61)
    from rdls import rdgdb_forward

    with pytest.raises(RoleError):
        write_ppm(rdgdb_forward(random_rgb(rng, 2, 2)), tmp_path / "x.ppm")


def test_pgm_round_trip(tmp_path):
    rng = np.random.default_rng(62)
    plane = plane_from_array(rng.integers(0, 256, (5, 9)), 0, 255)
    path = tmp_path / "g.pgm"
    write_pgm(plane, path)
    assert plane_equal(read_pgm(path), plane)


@pytest.mark.parametrize(
    "desc",
    [
        TransformDescriptor.identity(),
        TransformDescriptor.rdgdb(),
        TransformDescriptor.rct(),
        TransformDescriptor.rdls_rdgdb(w_dg=16, w_db=1),
        TransformDescriptor.from_slots(SlotChoice("rdls", 4), SlotChoice("none")),
    ],
)
def test_planar_round_trip(tmp_path, desc):
    rng = np.random.default_rng(63)
    img = apply_descriptor(random_rgb(rng, 6, 11), desc)
    path = tmp_path / "t.rdls"
    write_planar(img, desc, path)
    back, desc2 = read_planar(path)
    assert desc2 == desc
    assert images_equal(back, img)


def test_planar_rejects_bad_magic_and_truncation(tmp_path):
    rng = np.random.default_rng(64)
    img = random_rgb(rng, 4, 4)
    path = tmp_path / "p.rdls"
    write_planar(img, TransformDescriptor.identity(), path)
    data = bytearray(path.read_bytes())
    bad = tmp_path / "bad.rdls"
    bad.write_bytes(b"XXXXX" + bytes(data[5:]))
    with pytest.raises(FormatError, match="magic"):
        read_planar(bad)
    bad.write_bytes(bytes(data[:-7]))
    with pytest.raises(FormatError, match="truncated"):
        read_planar(bad)


def test_planar_rejects_descriptor_role_mismatch(tmp_path):
    rng = np.random.default_rng(65)
    img = random_rgb(rng, 4, 4)
    path = tmp_path / "p.rdls"
    write_planar(img, TransformDescriptor.identity(), path)
    data = bytearray(path.read_bytes())
    # corrupt the descriptor kind byte: roles in the file no longer match
    data[6] = 1
    path.write_bytes(bytes(data))
    with pytest.raises(FormatError):
        read_planar(path)


def test_planar_write_checks_roles(tmp_path):
    rng = np.random.default_rng(66)
    img = random_rgb(rng, 4, 4)
    with pytest.raises(RoleError):
        write_planar(img, TransformDescriptor.rdgdb(), tmp_path / "x.rdls")


def test_bayer_block_examples():
    mosaic = plane_from_array(np.array([[10, 20], [30, 40]]), 0, 255)
    img = bayer_rggb_to_rgb(mosaic)
    assert [int(p.samples[0, 0]) for p in img.planes] == [10, 25, 40]
    mosaic = plane_from_array(np.array([[10, 20], [21, 40]]), 0, 255)
    img = bayer_rggb_to_rgb(mosaic)
    assert int(img.plane("G").samples[0, 0]) == 21  # 20.5 rounds up


def test_bayer_constant_mosaic():
    mosaic = plane_from_array(np.full((6, 8), 77), 0, 255)
    img = bayer_rggb_to_rgb(mosaic)
    assert img.width == 4 and img.height == 3
    for p in img.planes:
        assert np.all(p.samples == 77)


def test_bayer_rejects_odd_dimensions():
    with pytest.raises(ValueError, match="even"):
        bayer_rggb_to_rgb(plane_from_array(np.zeros((3, 4), dtype=np.int64), 0, 255))


def test_reduce3x_examples():
    block = np.arange(1, 10).reshape(3, 3)
    img = rgb_image(block, np.full((3, 3), 9), block * 0)
    out = reduce3x(img)
    assert out.width == 1 and out.height == 1
    assert int(out.plane("R").samples[0, 0]) == 5  # mean of 1..9
    vals = np.array([[1, 2, 3], [4, 5, 6], [7, 8, 4]])  # sums to 40
    out = reduce3x(rgb_image(vals, vals, vals))
    assert int(out.plane("R").samples[0, 0]) == 4  # round(40 / 9)


def test_reduce3x_drops_trailing_remainder():
    rng = np.random.default_rng(67)
    img = random_rgb(rng, 8, 7)
    out = reduce3x(img)
    assert (out.width, out.height) == (2, 2)
    manual = img.plane("G").samples[:6, :6].reshape(2, 3, 2, 3).sum(axis=(1, 3))
    expected = (2 * manual + 9) // 18
    assert np.array_equal(out.plane("G").samples, expected)


def test_reduce3x_rejects_too_small_images():
    rng = np.random.default_rng(68)
    with pytest.raises(ValueError, match="too small"):
        reduce3x(random_rgb(rng, 2, 9))


def test_awgn_zero_sigma_is_identity():
    rng = np.random.default_rng(69)
    img = random_rgb(rng, 10, 10)
    assert images_equal(add_awgn(img, 0, 0, 0, 123), img)


def test_awgn_is_deterministic_per_seed():
    rng = np.random.default_rng(70)
    img = random_rgb(rng, 12, 12)
    a = add_awgn(img, 5, 10, 15, 99)
    b = add_awgn(img, 5, 10, 15, 99)
    c = add_awgn(img, 5, 10, 15, 100)
    assert images_equal(a, b)
    assert not images_equal(a, c)


def test_awgn_sample_standard_deviation():
    img = rgb_image(*(np.full((300, 400), 128),) * 3)  # 120000 pixels
    noisy = add_awgn(img, 20.0, 20.0, 20.0, 7)
    for p in noisy.planes:
        std = float(np.std(p.samples - 128))
        assert 18.5 <= std <= 21.5


def test_awgn_validates_inputs():
    rng = np.random.default_rng(71)
    img = random_rgb(rng, 4, 4)
    with pytest.raises(ValueError, match="sigmas"):
        add_awgn(img, -1.0, 0, 0, 1)
    from rdls import rdgdb_forward

    with pytest.raises(RoleError):
        add_awgn(rdgdb_forward(img), 1, 1, 1, 1)


def test_correlated_scene_is_deterministic_and_correlated():
    a = make_correlated_scene(32, 24, 5)
    b = make_correlated_scene(32, 24, 5)
    assert images_equal(a, b)
    r = a.plane("R").samples.ravel().astype(float)
    g = a.plane("G").samples.ravel().astype(float)
    assert np.corrcoef(r, g)[0, 1] > 0.8
