"""File formats and dataset preparation.

Covers binary PPM (P6) / PGM (P5) at maxval 255, the self-describing
planar container for transformed images, RGGB mosaic conversion, 3x
reduction, seeded Gaussian noise, and a deterministic synthetic scene
generator used by the noise-series pipeline. All multi-byte integers are
little-endian; the planar layout is frozen in docs/FORMATS.md.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .core import (
    ColorImage,
    Plane,
    RGB_ROLES,
    SlotChoice,
    TransformDescriptor,
    TransformKind,
    make_image,
    plane_from_array,
    rgb_image,
)
from .errors import FormatError, RoleError

# ---------------------------------------------------------------------------
# netpbm (P5/P6, binary, maxval 255)


def _parse_pnm_header(data: bytes, magic: bytes, path) -> tuple[int, int, int]:
    """Return (width, height, raster offset); handles comments and whitespace."""
    if not data.startswith(magic):
        raise FormatError(f"{path}: not a {magic.decode()} file")
    pos = len(magic)
    fields: list[int] = []
    while len(fields) < 3:
        if pos >= len(data):
            raise FormatError(f"{path}: truncated header")
        ch = data[pos : pos + 1]
        if ch in b" \t\r\n":
            pos += 1
        elif ch == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise FormatError(f"{path}: unterminated comment")
            pos = nl + 1
        elif ch.isdigit():
            end = pos
            while end < len(data) and data[end : end + 1].isdigit():
                end += 1
            fields.append(int(data[pos:end]))
            pos = end
        else:
            raise FormatError(f"{path}: unexpected byte {ch!r} in header")
    if pos >= len(data) or data[pos : pos + 1] not in b" \t\r\n":
        raise FormatError(f"{path}: missing whitespace before raster")
    width, height, maxval = fields
    if maxval != 255:
        raise FormatError(f"{path}: unsupported maxval {maxval}, only 255 is handled")
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad dimensions {width}x{height}")
    return width, height, pos + 1


def read_ppm(path) -> ColorImage:
    """Read a binary P6 PPM (maxval 255) into an RGB image."""
    data = Path(path).read_bytes()
    width, height, offset = _parse_pnm_header(data, b"P6", path)
    need = width * height * 3
    raster = data[offset : offset + need]
    if len(raster) != need:
        raise FormatError(f"{path}: raster truncated ({len(raster)} of {need} bytes)")
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).astype(np.int64)
    return rgb_image(arr[:, :, 0], arr[:, :, 1], arr[:, :, 2])


def write_ppm(img: ColorImage, path) -> None:
    if img.roles != RGB_ROLES:
        raise RoleError(f"PPM output needs an RGB image, got roles {img.roles}")
    arr = np.stack([p.samples for p in img.planes], axis=-1).astype(np.uint8)
    header = f"P6\n{img.width} {img.height}\n255\n".encode()
    Path(path).write_bytes(header + arr.tobytes())


def read_pgm(path) -> Plane:
    """Read a binary P5 PGM (maxval 255) into a [0, 255] plane."""
    data = Path(path).read_bytes()
    width, height, offset = _parse_pnm_header(data, b"P5", path)
    need = width * height
    raster = data[offset : offset + need]
    if len(raster) != need:
        raise FormatError(f"{path}: raster truncated ({len(raster)} of {need} bytes)")
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width).astype(np.int64)
    return plane_from_array(arr, 0, 255)


def write_pgm(plane: Plane, path) -> None:
    if plane.min_value < 0 or plane.max_value > 255:
        raise ValueError("PGM output needs samples in [0, 255]")
    header = f"P5\n{plane.width} {plane.height}\n255\n".encode()
    Path(path).write_bytes(header + plane.samples.astype(np.uint8).tobytes())


# ---------------------------------------------------------------------------
# planar container for (possibly) transformed images

PLANAR_MAGIC = b"RDLS1"
PLANAR_VERSION = 1
_PLANAR_FIXED = struct.Struct("<5sBBBBHH")  # magic, ver, kind, dg, db, w_dg, w_db
_PLANE_HEADER = struct.Struct("<4sIIhh")  # role, width, height, min, max

_KIND_CODES = {
    TransformKind.IDENTITY: 0,
    TransformKind.RDGDB: 1,
    TransformKind.RCT: 2,
    TransformKind.RDLS_RDGDB: 3,
    TransformKind.MIXED: 4,
}
_KIND_FROM_CODE = {v: k for k, v in _KIND_CODES.items()}
_OPTION_CODES = {"none": 0, "rdgdb": 1, "rdls": 2}
_OPTION_FROM_CODE = {v: k for k, v in _OPTION_CODES.items()}


def _pack_descriptor(desc: TransformDescriptor) -> bytes:
    return _PLANAR_FIXED.pack(
        PLANAR_MAGIC,
        PLANAR_VERSION,
        _KIND_CODES[desc.kind],
        _OPTION_CODES[desc.dg.option],
        _OPTION_CODES[desc.db.option],
        desc.dg.w or 0,
        desc.db.w or 0,
    )


def _unpack_descriptor(data: bytes, path) -> TransformDescriptor:
    if len(data) < _PLANAR_FIXED.size:
        raise FormatError(f"{path}: truncated header")
    magic, version, kind_code, dg_code, db_code, w_dg, w_db = _PLANAR_FIXED.unpack_from(data)
    if magic != PLANAR_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != PLANAR_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    try:
        kind = _KIND_FROM_CODE[kind_code]
        dg = SlotChoice(_OPTION_FROM_CODE[dg_code], w_dg or None)
        db = SlotChoice(_OPTION_FROM_CODE[db_code], w_db or None)
        return TransformDescriptor(kind, dg, db)
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{path}: invalid transform descriptor: {exc}") from None


def write_planar(img: ColorImage, desc: TransformDescriptor, path) -> None:
    """Write a transformed image with everything needed to invert it."""
    if img.roles != desc.output_roles():
        raise RoleError(
            f"image roles {img.roles} do not match descriptor output "
            f"{desc.output_roles()}"
        )
    parts = [_pack_descriptor(desc)]
    for p, role in zip(img.planes, img.roles):
        parts.append(
            _PLANE_HEADER.pack(role.ljust(4).encode(), p.width, p.height,
                               p.min_value, p.max_value)
        )
    for p in img.planes:
        parts.append(p.samples.astype("<i2").tobytes())
    Path(path).write_bytes(b"".join(parts))


def read_planar(path) -> tuple[ColorImage, TransformDescriptor]:
    data = Path(path).read_bytes()
    desc = _unpack_descriptor(data, path)
    pos = _PLANAR_FIXED.size
    headers = []
    for _ in range(3):
        if len(data) < pos + _PLANE_HEADER.size:
            raise FormatError(f"{path}: truncated plane header")
        role_raw, width, height, mn, mx = _PLANE_HEADER.unpack_from(data, pos)
        headers.append((role_raw.decode("ascii", "replace").strip(), width, height, mn, mx))
        pos += _PLANE_HEADER.size
    planes = []
    for role, width, height, mn, mx in headers:
        need = width * height * 2
        chunk = data[pos : pos + need]
        if len(chunk) != need:
            raise FormatError(f"{path}: truncated samples ({len(chunk)} of {need} bytes)")
        arr = np.frombuffer(chunk, dtype="<i2").reshape(height, width).astype(np.int64)
        try:
            planes.append(plane_from_array(arr, mn, mx))
        except Exception as exc:
            raise FormatError(f"{path}: invalid plane data: {exc}") from None
        pos += need
    if pos != len(data):
        raise FormatError(f"{path}: {len(data) - pos} trailing bytes")
    roles = tuple(h[0] for h in headers)
    if roles != desc.output_roles():
        raise FormatError(
            f"{path}: plane roles {roles} inconsistent with descriptor "
            f"{desc.output_roles()}"
        )
    try:
        return make_image(planes, roles), desc
    except Exception as exc:
        raise FormatError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# dataset preparation


def _round_half_up_nonneg(num: np.ndarray, den: int) -> np.ndarray:
    # round to nearest, ties away from zero; callers guarantee num >= 0
    return (2 * num + den) // (2 * den)


def bayer_rggb_to_rgb(mosaic: Plane) -> ColorImage:
    """Convert an RGGB mosaic plane to a half-resolution RGB image.

    R and B come straight from their subpixels; G is the rounded average of
    the two green subpixels in each 2x2 block.
    """
    if mosaic.width % 2 or mosaic.height % 2:
        raise ValueError(
            f"RGGB mosaic needs even dimensions, got {mosaic.width}x{mosaic.height}"
        )
    if mosaic.min_value < 0 or mosaic.max_value > 255:
        raise ValueError("mosaic samples must be within [0, 255]")
    a = mosaic.samples
    r = a[0::2, 0::2]
    g = _round_half_up_nonneg(a[0::2, 1::2] + a[1::2, 0::2], 2)
    b = a[1::2, 1::2]
    return rgb_image(r, g, b)


def reduce3x(img: ColorImage) -> ColorImage:
    """Downscale 3x: each output pixel is the rounded mean of a 3x3 block.

    Trailing rows/columns that do not fill a block are dropped.
    """
    h3, w3 = img.height // 3, img.width // 3
    if h3 < 1 or w3 < 1:
        raise ValueError(f"image {img.width}x{img.height} too small to reduce 3x")
    planes = []
    for p in img.planes:
        a = p.samples[: h3 * 3, : w3 * 3]
        sums = a.reshape(h3, 3, w3, 3).sum(axis=(1, 3))
        q = _round_half_up_nonneg(np.abs(sums), 9)
        planes.append(plane_from_array(np.where(sums < 0, -q, q), p.min_value, p.max_value))
    return make_image(planes, img.roles)


def add_awgn(
    img: ColorImage,
    sigma_r: float,
    sigma_g: float,
    sigma_b: float,
    seed: int,
) -> ColorImage:
    """Add independent per-component Gaussian noise, round, clamp to [0, 255].

    Deterministic: numpy's PCG64 generator seeded with ``seed``, drawing one
    normal field per component in R, G, B order (see docs/FORMATS.md).
    """
    if img.roles != RGB_ROLES:
        raise RoleError(f"noise synthesis needs an RGB image, got roles {img.roles}")
    sigmas = (sigma_r, sigma_g, sigma_b)
    if any(s < 0 for s in sigmas):
        raise ValueError(f"sigmas must be >= 0, got {sigmas}")
    rng = np.random.default_rng(seed)
    planes = []
    for p, sigma in zip(img.planes, sigmas):
        noise = rng.normal(0.0, sigma, size=p.samples.shape)
        noisy = np.clip(np.rint(p.samples + noise), 0, 255).astype(np.int64)
        planes.append(plane_from_array(noisy, 0, 255))
    return make_image(planes, RGB_ROLES)


def make_correlated_scene(width: int, height: int, seed: int) -> ColorImage:
    """Deterministic scene with strongly correlated R, G, B.

    A shared base of low-frequency waves carries midband detail (wavelengths
    of a few pixels) that predictors cannot remove but channel differencing
    cancels; each channel adds an independent low-amplitude smooth offset.
    Used as the clean input for noise-series experiments and tests.
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    nx = xx / max(width, 2)
    ny = yy / max(height, 2)

    def waves(n, fmin, fmax, amin, amax, ux, uy):
        field = np.zeros((height, width))
        for _ in range(n):
            fx = rng.uniform(fmin, fmax)
            fy = rng.uniform(fmin, fmax)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            amp = rng.uniform(amin, amax)
            field += amp * np.cos(2.0 * np.pi * (fx * ux + fy * uy) + phase)
        return field

    # smooth structure scales with the image; detail has pixel-scale
    # wavelengths (4 to 14 px) regardless of image size
    base = (
        128.0
        + waves(6, 0.4, 3.0, 10.0, 26.0, nx, ny)
        + waves(8, 0.07, 0.25, 4.0, 9.0, xx, yy)
    )
    channels = []
    for _ in range(3):
        off = waves(2, 0.4, 2.5, 4.0, 10.0, nx, ny)
        channels.append(np.clip(np.rint(base + off), 0, 255).astype(np.int64))
    return rgb_image(*channels)
