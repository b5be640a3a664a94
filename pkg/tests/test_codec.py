import numpy as np
import pytest

from rdls import DecodeError, constant_plane, plane_equal, plane_from_array
from rdls.codec import (
    CodedPlane,
    HEADER_SIZE,
    coded_size,
    decode_plane,
    decode_plane_bytes,
    encode_plane,
    measure_bitrate,
)
from rdls.imageio import add_awgn, make_correlated_scene


def _random_plane(rng, lo, hi, w=None, h=None):
    if w is None:
        w = int(rng.integers(1, 48))
    if h is None:
        h = int(rng.integers(1, 48))
    return plane_from_array(rng.integers(lo, hi + 1, (h, w), dtype=np.int64), lo, hi)


def test_round_trip_random_planes():
    rng = np.random.default_rng(50)
    for _ in range(150):
        lo, hi = [(0, 255), (-255, 255), (-510, 510)][int(rng.integers(3))]
        p = _random_plane(rng, lo, hi)
        assert plane_equal(decode_plane(encode_plane(p)), p)


def test_round_trip_survives_serialization():
    rng = np.random.default_rng(51)
    p = _random_plane(rng, -255, 255, 20, 20)
    data = encode_plane(p).to_bytes()
    assert plane_equal(decode_plane_bytes(data), p)


def test_identical_planes_give_identical_bitstreams():
    rng = np.random.default_rng(52)
    arr = rng.integers(0, 256, (15, 17))
    a = encode_plane(plane_from_array(arr, 0, 255)).to_bytes()
    b = encode_plane(plane_from_array(arr.copy(), 0, 255)).to_bytes()
    assert a == b


def test_constant_plane_compresses_far_below_a_tenth_bpp():
    assert measure_bitrate(constant_plane(512, 512, 7)) < 0.1


def test_uniform_random_plane_is_incompressible():
    rng = np.random.default_rng(53)
    p = plane_from_array(rng.integers(0, 256, (64, 64)), 0, 255)
    assert measure_bitrate(p) >= 8.0


def test_measure_bitrate_matches_serialized_size():
    rng = np.random.default_rng(54)
    p = _random_plane(rng, 0, 255, 30, 10)
    size = len(encode_plane(p).to_bytes())
    assert coded_size(p) == size
    assert measure_bitrate(p) == 8.0 * size / (30 * 10)


def test_noise_does_not_reduce_bitrate():
    base = make_correlated_scene(48, 48, 55)
    rates = []
    for seed in range(5):
        noisy = add_awgn(base, 15.0, 15.0, 15.0, seed)
        rates.append(measure_bitrate(noisy.plane("G")))
    clean = measure_bitrate(base.plane("G"))
    assert np.mean(rates) >= clean


def test_every_single_byte_corruption_is_detected():
    rng = np.random.default_rng(56)
    p = _random_plane(rng, -255, 255, 16, 16)
    data = bytearray(encode_plane(p).to_bytes())
    for pos in range(len(data)):
        for flip in (0xFF, 0x01):
            bad = bytearray(data)
            bad[pos] ^= flip
            with pytest.raises(DecodeError):
                decode_plane_bytes(bytes(bad))


def test_corruption_detected_on_nearly_constant_plane():
    # loosening the bounds bytes must not slip through the checksum
    p = constant_plane(16, 16, 0)
    data = bytearray(encode_plane(p).to_bytes())
    for pos in range(len(data)):
        bad = bytearray(data)
        bad[pos] ^= 0xFF
        with pytest.raises(DecodeError):
            decode_plane_bytes(bytes(bad))


def test_truncated_stream_reports_offset():
    rng = np.random.default_rng(57)
    p = _random_plane(rng, 0, 255, 24, 24)
    data = encode_plane(p).to_bytes()
    with pytest.raises(DecodeError, match="byte offset"):
        decode_plane_bytes(data[: len(data) - 3])
    with pytest.raises(DecodeError):
        decode_plane_bytes(data[: HEADER_SIZE - 2])


def test_header_validation():
    with pytest.raises(DecodeError, match="magic"):
        CodedPlane.from_bytes(b"XXXX" + bytes(HEADER_SIZE))
    rng = np.random.default_rng(58)
    good = encode_plane(_random_plane(rng, 0, 255, 4, 4)).to_bytes()
    bad_version = bytearray(good)
    bad_version[4] = 99
    with pytest.raises(DecodeError, match="version"):
        CodedPlane.from_bytes(bytes(bad_version))


def test_encode_rejects_planes_outside_codec_range():
    p = plane_from_array(np.array([[1000]]), 0, 1000)
    with pytest.raises(ValueError, match="codec range"):
        encode_plane(p)


def test_negative_chrominance_round_trip():
    rng = np.random.default_rng(59)
    for _ in range(50):
        p = _random_plane(rng, -255, 255)
        assert plane_equal(decode_plane(encode_plane(p)), p)
