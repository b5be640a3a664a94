"""Pure-numpy kernel implementations.

Reference semantics for the numba backend: every function here must match
its numba counterpart bit for bit. Array kernels are vectorized; the
Golomb-Rice bit packing falls back to a plain Python loop, which is slower
but exact.
"""

from __future__ import annotations

import numpy as np

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


def _round_div_away(num: np.ndarray, den) -> np.ndarray:
    """round(num / den) with ties away from zero, exact integer arithmetic."""
    a = np.abs(num)
    q = (2 * a + den) // (2 * den)
    return np.where(num < 0, -q, q)


def _window_sums(src: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """3x3 in-bounds window sum (center included) and pixel count per pixel."""
    h, w = src.shape
    padded = np.zeros((h + 2, w + 2), dtype=np.int64)
    padded[1:-1, 1:-1] = src
    present = np.zeros((h + 2, w + 2), dtype=np.int64)
    present[1:-1, 1:-1] = 1
    total = np.zeros((h, w), dtype=np.int64)
    count = np.zeros((h, w), dtype=np.int64)
    for dy in range(3):
        for dx in range(3):
            total += padded[dy:dy + h, dx:dx + w]
            count += present[dy:dy + h, dx:dx + w]
    return total, count


def denoise(src: np.ndarray, w: int) -> np.ndarray:
    total, count = _window_sums(src)
    num = (w - 1) * src + total
    den = (w - 1) + count
    return _round_div_away(num, den)


def denoise_all(src: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Denoised planes for every weight, amortizing the window sums."""
    total, count = _window_sums(src)
    out = np.empty((len(weights), src.shape[0], src.shape[1]), dtype=np.int64)
    for i, w in enumerate(weights):
        w = int(w)
        out[i] = _round_div_away((w - 1) * src + total, (w - 1) + count)
    return out


def med_residual(src: np.ndarray, mid: int) -> np.ndarray:
    """Residual under the median edge-detecting predictor.

    Boundary rules: origin predicts mid-range, first row predicts the left
    neighbor, first column predicts the one above.
    """
    h, w = src.shape
    pred = np.empty_like(src)
    pred[0, 0] = mid
    if w > 1:
        pred[0, 1:] = src[0, :-1]
    if h > 1:
        pred[1:, 0] = src[:-1, 0]
    if h > 1 and w > 1:
        a = src[1:, :-1]
        b = src[:-1, 1:]
        c = src[:-1, :-1]
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        pred[1:, 1:] = np.where(c >= hi, lo, np.where(c <= lo, hi, a + b - c))
    return src - pred


def avg_residual(src: np.ndarray, mid: int) -> np.ndarray:
    """Residual under the upper/left-average predictor (floor division)."""
    h, w = src.shape
    pred = np.empty_like(src)
    pred[0, 0] = mid
    if w > 1:
        pred[0, 1:] = src[0, :-1]
    if h > 1:
        pred[1:, 0] = src[:-1, 0]
    if h > 1 and w > 1:
        pred[1:, 1:] = (src[1:, :-1] + src[:-1, 1:]) // 2
    return src - pred


class _BitWriter:
    __slots__ = ("out", "acc", "nacc")

    def __init__(self):
        self.out = bytearray()
        self.acc = 0
        self.nacc = 0

    def write(self, value: int, nbits: int) -> None:
        # low nbits of value, most significant bit first
        self.acc = (self.acc << nbits) | (value & ((1 << nbits) - 1))
        self.nacc += nbits
        while self.nacc >= 8:
            self.nacc -= 8
            self.out.append((self.acc >> self.nacc) & 0xFF)
        self.acc &= (1 << self.nacc) - 1

    def finish(self) -> tuple[np.ndarray, int]:
        nbits = len(self.out) * 8 + self.nacc
        if self.nacc:
            self.out.append((self.acc << (8 - self.nacc)) & 0xFF)
        return np.frombuffer(bytes(self.out), dtype=np.uint8), nbits


def _row_k(abs_sum: int, count: int) -> int:
    if count == 0:
        return K_INIT
    k = 0
    while k < K_MAX and (count << k) < abs_sum:
        k += 1
    return k


def encode_plane_bits(src: np.ndarray, mid: int) -> tuple[np.ndarray, int]:
    """MED-predict, zigzag-map, and Golomb-Rice code a plane.

    Each row starts with a 1-bit all-zero flag; coded rows use the k derived
    from previously coded data. Returns (byte buffer, exact bit count).
    """
    h, w = src.shape
    mapped = med_residual(src, mid)
    np.multiply(mapped, 2, out=mapped)
    neg = mapped < 0
    mapped[neg] = -mapped[neg] - 1
    writer = _BitWriter()
    abs_sum = 0
    count = 0
    for y in range(h):
        row = mapped[y]
        if not row.any():
            writer.write(1, 1)
            count += w
            continue
        writer.write(0, 1)
        k = _row_k(abs_sum, count)
        for u in row.tolist():
            q = u >> k
            if q < Q_LIMIT:
                # q one-bits, a zero terminator, then the k low bits
                writer.write((((1 << q) - 1) << 1 << k) | (u & ((1 << k) - 1)), q + 1 + k)
            else:
                writer.write((1 << Q_LIMIT) - 1, Q_LIMIT)
                writer.write(u, ESCAPE_BITS)
            abs_sum += (u + 1) >> 1
            count += 1
    return writer.finish()


class _BitReader:
    __slots__ = ("data", "bitpos", "nbits")

    def __init__(self, data: np.ndarray):
        self.data = data
        self.bitpos = 0
        self.nbits = len(data) * 8

    def read_bit(self) -> int:
        if self.bitpos >= self.nbits:
            raise _Truncated()
        byte = self.data[self.bitpos >> 3]
        bit = (byte >> (7 - (self.bitpos & 7))) & 1
        self.bitpos += 1
        return int(bit)

    def read_bits(self, n: int) -> int:
        v = 0
        for _ in range(n):
            v = (v << 1) | self.read_bit()
        return v


class _Truncated(Exception):
    pass


def decode_plane_bits(
    data: np.ndarray, width: int, height: int, mid: int, min_value: int, max_value: int
) -> tuple[np.ndarray, int, int]:
    """Inverse of encode_plane_bits.

    Returns (samples, error code, byte offset of the failure). Samples are
    only meaningful when the error code is DECODE_OK.
    """
    out = np.zeros((height, width), dtype=np.int64)
    reader = _BitReader(data)
    abs_sum = 0
    count = 0
    try:
        for y in range(height):
            zero_row = reader.read_bit()
            k = 0 if zero_row else _row_k(abs_sum, count)
            for x in range(width):
                if zero_row:
                    v = 0
                else:
                    q = 0
                    while q < Q_LIMIT and reader.read_bit():
                        q += 1
                    if q < Q_LIMIT:
                        u = (q << k) | reader.read_bits(k)
                    else:
                        u = reader.read_bits(ESCAPE_BITS)
                    abs_sum += (u + 1) >> 1
                    v = (u >> 1) if (u & 1) == 0 else -((u + 1) >> 1)
                count += 1
                # MED prediction from already-decoded neighbors
                if y == 0 and x == 0:
                    pred = mid
                elif y == 0:
                    pred = out[0, x - 1]
                elif x == 0:
                    pred = out[y - 1, 0]
                else:
                    a = out[y, x - 1]
                    b = out[y - 1, x]
                    c = out[y - 1, x - 1]
                    if c >= max(a, b):
                        pred = min(a, b)
                    elif c <= min(a, b):
                        pred = max(a, b)
                    else:
                        pred = a + b - c
                s = pred + v
                if s < min_value or s > max_value:
                    return out, DECODE_RANGE, reader.bitpos >> 3
                out[y, x] = s
    except _Truncated:
        return out, DECODE_TRUNCATED, reader.bitpos >> 3
    # whole bytes must be consumed and padding bits must be zero
    if len(data) != (reader.bitpos + 7) // 8:
        return out, DECODE_TRAILING, reader.bitpos >> 3
    while reader.bitpos < reader.nbits:
        if reader.read_bit():
            return out, DECODE_TRAILING, (reader.bitpos - 1) >> 3
    return out, DECODE_OK, reader.bitpos >> 3
