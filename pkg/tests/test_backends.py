"""Both kernel backends must produce bit-identical results everywhere."""

import numpy as np
import pytest

from rdls import _kernels
from rdls._kernels import common, numpy_impl

numba_impl = pytest.importorskip("rdls._kernels.numba_impl")

WEIGHTS = np.asarray([1 << k for k in range(11)], dtype=np.int64)


def _cases():
    rng = np.random.default_rng(99)
    cases = []
    for lo, hi in ((0, 255), (-255, 255), (-510, 510)):
        for _ in range(8):
            h, w = rng.integers(1, 48, 2)
            cases.append((rng.integers(lo, hi + 1, (h, w), dtype=np.int64), lo, hi))
    cases.append((np.zeros((1, 1), dtype=np.int64), 0, 255))
    cases.append((np.full((1, 37), 200, dtype=np.int64), 0, 255))
    cases.append((np.full((29, 1), -100, dtype=np.int64), -255, 255))
    return cases


def test_active_backend_is_known():
    assert _kernels.active_backend() in ("numba", "numpy")


@pytest.mark.parametrize("src,lo,hi", _cases())
def test_backends_agree(src, lo, hi):
    mid = common.mid_range(lo, hi)
    for w in (1, 2, 64, 1024):
        assert np.array_equal(numpy_impl.denoise(src, w), numba_impl.denoise(src, w))
    assert np.array_equal(
        numpy_impl.denoise_all(src, WEIGHTS), numba_impl.denoise_all(src, WEIGHTS)
    )
    assert np.array_equal(
        numpy_impl.med_residual(src, mid), numba_impl.med_residual(src, mid)
    )
    assert np.array_equal(
        numpy_impl.avg_residual(src, mid), numba_impl.avg_residual(src, mid)
    )
    buf_np, nbits_np = numpy_impl.encode_plane_bits(src, mid)
    buf_nb, nbits_nb = numba_impl.encode_plane_bits(src, mid)
    assert nbits_np == nbits_nb
    assert np.array_equal(buf_np, buf_nb)
    h, w = src.shape
    out_np, err_np, pos_np = numpy_impl.decode_plane_bits(buf_np, w, h, mid, lo, hi)
    out_nb, err_nb, pos_nb = numba_impl.decode_plane_bits(buf_np, w, h, mid, lo, hi)
    assert (err_np, pos_np) == (err_nb, pos_nb) == (common.DECODE_OK, len(buf_np))
    assert np.array_equal(out_np, src)
    assert np.array_equal(out_nb, src)


def test_backends_agree_on_corrupt_streams():
    rng = np.random.default_rng(17)
    src = rng.integers(0, 256, (12, 12), dtype=np.int64)
    mid = common.mid_range(0, 255)
    buf, _ = numpy_impl.encode_plane_bits(src, mid)
    for pos in range(len(buf)):
        bad = buf.copy()
        bad[pos] ^= 0xFF
        a = numpy_impl.decode_plane_bits(bad, 12, 12, mid, 0, 255)
        b = numba_impl.decode_plane_bits(bad, 12, 12, mid, 0, 255)
        assert a[1] == b[1] and a[2] == b[2]
        if a[1] == common.DECODE_OK:
            assert np.array_equal(a[0], b[0])
