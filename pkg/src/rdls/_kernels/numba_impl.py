"""Numba-compiled kernel implementations.

Same contracts and bit-exact same outputs as numpy_impl; see that module
for the semantics. Kernels are serial (the workloads are per-plane and
small enough that JIT-compiled loops win without threading).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .common import (
    DECODE_OK,
    DECODE_RANGE,
    DECODE_TRAILING,
    DECODE_TRUNCATED,
    ESCAPE_BITS,
    K_INIT,
    K_MAX,
    Q_LIMIT,
)


@njit(cache=True)
def _div_away(num, den):
    a = -num if num < 0 else num
    q = (2 * a + den) // (2 * den)
    return -q if num < 0 else q


@njit(cache=True)
def _denoise_kernel(src, w, out):
    h, wid = src.shape
    for y in range(h):
        y0 = y - 1 if y > 0 else 0
        y1 = y + 2 if y + 2 <= h else h
        for x in range(wid):
            x0 = x - 1 if x > 0 else 0
            x1 = x + 2 if x + 2 <= wid else wid
            total = 0
            count = 0
            for yy in range(y0, y1):
                for xx in range(x0, x1):
                    total += src[yy, xx]
                    count += 1
            out[y, x] = _div_away((w - 1) * src[y, x] + total, (w - 1) + count)


@njit(cache=True)
def _denoise_all_kernel(src, weights, out):
    h, wid = src.shape
    nw = weights.size
    for y in range(h):
        y0 = y - 1 if y > 0 else 0
        y1 = y + 2 if y + 2 <= h else h
        for x in range(wid):
            x0 = x - 1 if x > 0 else 0
            x1 = x + 2 if x + 2 <= wid else wid
            total = 0
            count = 0
            for yy in range(y0, y1):
                for xx in range(x0, x1):
                    total += src[yy, xx]
                    count += 1
            c = src[y, x]
            for i in range(nw):
                w = weights[i]
                out[i, y, x] = _div_away((w - 1) * c + total, (w - 1) + count)


def denoise(src: np.ndarray, w: int) -> np.ndarray:
    out = np.empty_like(src)
    _denoise_kernel(src, np.int64(w), out)
    return out


def denoise_all(src: np.ndarray, weights: np.ndarray) -> np.ndarray:
    out = np.empty((len(weights), src.shape[0], src.shape[1]), dtype=np.int64)
    _denoise_all_kernel(src, np.asarray(weights, dtype=np.int64), out)
    return out


@njit(cache=True)
def _med_pred(a, b, c):
    lo = a if a < b else b
    hi = a if a > b else b
    if c >= hi:
        return lo
    if c <= lo:
        return hi
    return a + b - c


@njit(cache=True)
def _med_residual_kernel(src, mid, out):
    h, w = src.shape
    for y in range(h):
        for x in range(w):
            if y == 0 and x == 0:
                pred = mid
            elif y == 0:
                pred = src[0, x - 1]
            elif x == 0:
                pred = src[y - 1, 0]
            else:
                pred = _med_pred(src[y, x - 1], src[y - 1, x], src[y - 1, x - 1])
            out[y, x] = src[y, x] - pred


@njit(cache=True)
def _avg_residual_kernel(src, mid, out):
    h, w = src.shape
    for y in range(h):
        for x in range(w):
            if y == 0 and x == 0:
                pred = mid
            elif y == 0:
                pred = src[0, x - 1]
            elif x == 0:
                pred = src[y - 1, 0]
            else:
                pred = (src[y, x - 1] + src[y - 1, x]) // 2
            out[y, x] = src[y, x] - pred


def med_residual(src: np.ndarray, mid: int) -> np.ndarray:
    out = np.empty_like(src)
    _med_residual_kernel(src, np.int64(mid), out)
    return out


def avg_residual(src: np.ndarray, mid: int) -> np.ndarray:
    out = np.empty_like(src)
    _avg_residual_kernel(src, np.int64(mid), out)
    return out


@njit(cache=True)
def _row_k(abs_sum, count):
    if count == 0:
        return K_INIT
    k = 0
    while k < K_MAX and (count << k) < abs_sum:
        k += 1
    return k


@njit(cache=True)
def _put_bit(buf, bitpos, bit):
    if bit:
        buf[bitpos >> 3] |= np.uint8(1 << (7 - (bitpos & 7)))
    return bitpos + 1


@njit(cache=True)
def _put_bits(buf, bitpos, value, nbits):
    for i in range(nbits - 1, -1, -1):
        bitpos = _put_bit(buf, bitpos, (value >> i) & 1)
    return bitpos


@njit(cache=True)
def _encode_kernel(src, mid, buf):
    h, w = src.shape
    bitpos = 0
    abs_sum = 0
    count = 0
    for y in range(h):
        row_zero = True
        for x in range(w):
            if y == 0 and x == 0:
                pred = mid
            elif y == 0:
                pred = src[0, x - 1]
            elif x == 0:
                pred = src[y - 1, 0]
            else:
                pred = _med_pred(src[y, x - 1], src[y - 1, x], src[y - 1, x - 1])
            if src[y, x] != pred:
                row_zero = False
                break
        if row_zero:
            bitpos = _put_bit(buf, bitpos, 1)
            count += w
            continue
        bitpos = _put_bit(buf, bitpos, 0)
        k = _row_k(abs_sum, count)
        for x in range(w):
            if y == 0 and x == 0:
                pred = mid
            elif y == 0:
                pred = src[0, x - 1]
            elif x == 0:
                pred = src[y - 1, 0]
            else:
                pred = _med_pred(src[y, x - 1], src[y - 1, x], src[y - 1, x - 1])
            v = src[y, x] - pred
            u = 2 * v if v >= 0 else -2 * v - 1
            q = u >> k
            if q < Q_LIMIT:
                for _ in range(q):
                    bitpos = _put_bit(buf, bitpos, 1)
                bitpos = _put_bit(buf, bitpos, 0)
                bitpos = _put_bits(buf, bitpos, u, k)
            else:
                for _ in range(Q_LIMIT):
                    bitpos = _put_bit(buf, bitpos, 1)
                bitpos = _put_bits(buf, bitpos, u, ESCAPE_BITS)
            abs_sum += (u + 1) >> 1
            count += 1
    return bitpos


def encode_plane_bits(src: np.ndarray, mid: int) -> tuple[np.ndarray, int]:
    h, w = src.shape
    worst_bits = h + h * w * (Q_LIMIT + ESCAPE_BITS) + 8
    buf = np.zeros(worst_bits // 8 + 1, dtype=np.uint8)
    nbits = int(_encode_kernel(src, np.int64(mid), buf))
    return buf[: (nbits + 7) // 8], nbits


@njit(cache=True)
def _decode_kernel(data, width, height, mid, min_value, max_value, out):
    nbits = data.size * 8
    bitpos = 0
    abs_sum = 0
    count = 0
    for y in range(height):
        if bitpos >= nbits:
            return DECODE_TRUNCATED, bitpos >> 3
        byte = data[bitpos >> 3]
        zero_row = (byte >> (7 - (bitpos & 7))) & 1
        bitpos += 1
        k = _row_k(abs_sum, count)
        for x in range(width):
            if zero_row:
                v = 0
            else:
                q = 0
                while q < Q_LIMIT:
                    if bitpos >= nbits:
                        return DECODE_TRUNCATED, bitpos >> 3
                    bit = (data[bitpos >> 3] >> (7 - (bitpos & 7))) & 1
                    bitpos += 1
                    if bit == 0:
                        break
                    q += 1
                nread = k if q < Q_LIMIT else ESCAPE_BITS
                u = np.int64(0)
                for _ in range(nread):
                    if bitpos >= nbits:
                        return DECODE_TRUNCATED, bitpos >> 3
                    bit = (data[bitpos >> 3] >> (7 - (bitpos & 7))) & 1
                    bitpos += 1
                    u = (u << 1) | bit
                if q < Q_LIMIT:
                    u |= np.int64(q) << k
                abs_sum += (u + 1) >> 1
                v = (u >> 1) if (u & 1) == 0 else -((u + 1) >> 1)
            count += 1
            if y == 0 and x == 0:
                pred = mid
            elif y == 0:
                pred = out[0, x - 1]
            elif x == 0:
                pred = out[y - 1, 0]
            else:
                pred = _med_pred(out[y, x - 1], out[y - 1, x], out[y - 1, x - 1])
            s = pred + v
            if s < min_value or s > max_value:
                return DECODE_RANGE, bitpos >> 3
            out[y, x] = s
    if data.size != (bitpos + 7) // 8:
        return DECODE_TRAILING, bitpos >> 3
    while bitpos < nbits:
        bit = (data[bitpos >> 3] >> (7 - (bitpos & 7))) & 1
        if bit:
            return DECODE_TRAILING, bitpos >> 3
        bitpos += 1
    return DECODE_OK, bitpos >> 3


def decode_plane_bits(
    data: np.ndarray, width: int, height: int, mid: int, min_value: int, max_value: int
) -> tuple[np.ndarray, int, int]:
    out = np.zeros((height, width), dtype=np.int64)
    err, pos = _decode_kernel(
        np.ascontiguousarray(data),
        np.int64(width),
        np.int64(height),
        np.int64(mid),
        np.int64(min_value),
        np.int64(max_value),
        out,
    )
    return out, int(err), int(pos)
