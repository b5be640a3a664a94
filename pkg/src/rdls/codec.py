"""Internal lossless plane coder: MED prediction plus adaptive Golomb-Rice.

This is a stand-in for JPEG-LS-class predictive coding so transform effects
on bitrate can be measured end to end; it is NOT a standards implementation
and its absolute bitrates are only a proxy. Residuals are zigzag-mapped to
non-negative integers (0, -1, 1, -2, ... -> 0, 1, 2, 3, ...) and coded with
a Rice parameter re-derived per row from the running absolute-residual
mean. Rows whose residuals are all zero cost a single flag bit.

The payload is byte-aligned with zero padding bits; the header stores a
CRC-32 over geometry, bounds, and raw samples so any single corrupt byte is
detected rather than decoded silently. Bit order is MSB first. The exact
layout is frozen in docs/FORMATS.md.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import Plane
from .errors import DecodeError

MAGIC = b"RDLC"
VERSION = 1
_HEADER = struct.Struct("<4sBIIhhI")  # magic, version, width, height, min, max, crc
HEADER_SIZE = _HEADER.size

_CODEC_MIN, _CODEC_MAX = -511, 511

# Format limits (frozen in docs/FORMATS.md). They keep a corrupted header
# from driving allocations; real planes are far smaller.
MAX_DIM = 1 << 20
MAX_PIXELS = 1 << 26


@dataclass(frozen=True)
class CodedPlane:
    width: int
    height: int
    min_value: int
    max_value: int
    checksum: int
    payload: bytes

    def to_bytes(self) -> bytes:
        return (
            _HEADER.pack(
                MAGIC, VERSION, self.width, self.height,
                self.min_value, self.max_value, self.checksum,
            )
            + self.payload
        )

    @staticmethod
    def from_bytes(data: bytes) -> "CodedPlane":
        if len(data) < HEADER_SIZE:
            raise DecodeError("stream shorter than header", byte_offset=len(data))
        magic, version, width, height, mn, mx, crc = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise DecodeError(f"bad magic {magic!r}", byte_offset=0)
        if version != VERSION:
            raise DecodeError(f"unsupported version {version}", byte_offset=4)
        if not (1 <= width <= MAX_DIM and 1 <= height <= MAX_DIM) or (
            width * height > MAX_PIXELS
        ):
            raise DecodeError(f"bad dimensions {width}x{height}", byte_offset=5)
        if mn > mx:
            raise DecodeError(f"empty bounds [{mn}, {mx}]", byte_offset=13)
        return CodedPlane(width, height, mn, mx, crc, bytes(data[HEADER_SIZE:]))


def _checksum(width: int, height: int, mn: int, mx: int, samples: np.ndarray) -> int:
    head = struct.pack("<IIhh", width, height, mn, mx)
    return zlib.crc32(samples.astype("<i2").tobytes(), zlib.crc32(head))


def encode_plane(p: Plane) -> CodedPlane:
    """Losslessly encode a plane; bounds must be within [-511, 511]."""
    if p.min_value < _CODEC_MIN or p.max_value > _CODEC_MAX:
        raise ValueError(
            f"plane bounds [{p.min_value}, {p.max_value}] exceed codec range "
            f"[{_CODEC_MIN}, {_CODEC_MAX}]"
        )
    if p.width > MAX_DIM or p.height > MAX_DIM or p.width * p.height > MAX_PIXELS:
        raise ValueError(f"plane {p.width}x{p.height} exceeds format limits")
    mid = _kernels.mid_range(p.min_value, p.max_value)
    buf, nbits = _kernels.encode_plane_bits(p.samples, mid)
    return CodedPlane(
        p.width, p.height, p.min_value, p.max_value,
        _checksum(p.width, p.height, p.min_value, p.max_value, p.samples),
        buf.tobytes(),
    )


def decode_plane(c: CodedPlane) -> Plane:
    """Exact reconstruction; raises DecodeError on any corruption."""
    payload = np.frombuffer(c.payload, dtype=np.uint8)
    mid = _kernels.mid_range(c.min_value, c.max_value)
    samples, err, pos = _kernels.decode_plane_bits(
        payload, c.width, c.height, mid, c.min_value, c.max_value
    )
    offset = HEADER_SIZE + pos
    if err == _kernels.DECODE_TRUNCATED:
        raise DecodeError("payload truncated", byte_offset=offset)
    if err == _kernels.DECODE_TRAILING:
        raise DecodeError("trailing data or nonzero padding", byte_offset=offset)
    if err == _kernels.DECODE_RANGE:
        raise DecodeError("decoded sample out of declared bounds", byte_offset=offset)
    if _checksum(c.width, c.height, c.min_value, c.max_value, samples) != c.checksum:
        raise DecodeError("checksum mismatch", byte_offset=HEADER_SIZE)
    samples.flags.writeable = False
    return Plane(c.width, c.height, c.min_value, c.max_value, samples)


def decode_plane_bytes(data: bytes) -> Plane:
    return decode_plane(CodedPlane.from_bytes(data))


def coded_size(p: Plane) -> int:
    """Total compressed size in bytes, header included."""
    return len(encode_plane(p).to_bytes())


def measure_bitrate(p: Plane) -> float:
    """Encode and report 8 * total bytes / pixel count (bits per pixel)."""
    return 8.0 * coded_size(p) / (p.width * p.height)


def measure_bitrate_array(arr: np.ndarray, lo: int, hi: int) -> float:
    """measure_bitrate for a bare array with the given bounds."""
    h, w = arr.shape
    mid = _kernels.mid_range(lo, hi)
    _, nbits = _kernels.encode_plane_bits(arr, mid)
    return 8.0 * (HEADER_SIZE + (nbits + 7) // 8) / (w * h)
