"""Command-line front end.

Subcommands cover the whole pipeline: transform/inverse (planar files),
estimate (JSON report), select (JSON selection, optional apply), compress/
decompress (internal coder), noise/bayer/reduce3x (dataset prep), and
series (noise-sweep CSV of per-component bitrates). Reports and data go to
stdout or files; diagnostics go to stderr; exit code 0 means full success.

Environment: RDLS_BACKEND picks the kernel backend (numba/numpy),
RDLS_THREADS (0 = auto) caps kernel threading. Outputs are identical
either way. JSON schemas and the compressed container layout are frozen
in docs/FORMATS.md.
"""

from __future__ import annotations

import argparse
import csv
import json
import struct
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .codec import CodedPlane, encode_plane, decode_plane, measure_bitrate_array
from .core import (
    ColorImage,
    FILTER_WEIGHTS,
    FilterSpec,
    SlotChoice,
    TransformDescriptor,
    TransformKind,
    make_image,
)
from .errors import FormatError, RdlsError
from .estimate import entropy_h0, estimate_options, percent_delta
from .imageio import (
    add_awgn,
    bayer_rggb_to_rgb,
    make_correlated_scene,
    read_pgm,
    read_planar,
    read_ppm,
    reduce3x,
    write_planar,
    write_ppm,
)
from .selection import select_transform
from .transforms import apply_descriptor, invert_descriptor

SERIES_SIGMAS = (0, 5, 10, 20, 40, 80)

_METRIC_FLAGS = {"h0": "h0", "avg": "h0_pavg", "med": "h0_pmed"}

COMPRESSED_MAGIC = b"RDLI1"
COMPRESSED_VERSION = 1
_COMPRESSED_FIXED = struct.Struct("<5sBBBBHH")

_KIND_CODES = {"identity": 0, "rdgdb": 1, "rct": 2, "rdls-rdgdb": 3, "mixed": 4}
_OPTION_CODES = {"none": 0, "rdgdb": 1, "rdls": 2}


def _descriptor_fields(desc: TransformDescriptor) -> tuple[int, int, int, int, int]:
    return (
        _KIND_CODES[desc.kind.value],
        _OPTION_CODES[desc.dg.option],
        _OPTION_CODES[desc.db.option],
        desc.dg.w or 0,
        desc.db.w or 0,
    )


def _descriptor_from_fields(kind, dg, db, w_dg, w_db) -> TransformDescriptor:
    kinds = {v: k for k, v in _KIND_CODES.items()}
    options = {v: k for k, v in _OPTION_CODES.items()}
    try:
        return TransformDescriptor(
            TransformKind(kinds[kind]),
            SlotChoice(options[dg], w_dg or None),
            SlotChoice(options[db], w_db or None),
        )
    except (KeyError, ValueError) as exc:
        raise FormatError(f"invalid transform descriptor: {exc}") from None


def write_compressed(img: ColorImage, desc: TransformDescriptor, path) -> list[int]:
    """Write the 3-plane compressed container; returns per-plane byte sizes."""
    blobs = [encode_plane(p).to_bytes() for p in img.planes]
    parts = [_COMPRESSED_FIXED.pack(COMPRESSED_MAGIC, COMPRESSED_VERSION,
                                    *_descriptor_fields(desc))]
    for blob in blobs:
        parts.append(struct.pack("<I", len(blob)))
        parts.append(blob)
    Path(path).write_bytes(b"".join(parts))
    return [len(b) for b in blobs]


def read_compressed(path) -> tuple[ColorImage, TransformDescriptor]:
    data = Path(path).read_bytes()
    if len(data) < _COMPRESSED_FIXED.size:
        raise FormatError(f"{path}: truncated header")
    magic, version, kind, dg, db, w_dg, w_db = _COMPRESSED_FIXED.unpack_from(data)
    if magic != COMPRESSED_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != COMPRESSED_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    desc = _descriptor_from_fields(kind, dg, db, w_dg, w_db)
    pos = _COMPRESSED_FIXED.size
    planes = []
    for _ in range(3):
        if len(data) < pos + 4:
            raise FormatError(f"{path}: truncated plane length")
        (length,) = struct.unpack_from("<I", data, pos)
        pos += 4
        blob = data[pos : pos + length]
        if len(blob) != length:
            raise FormatError(f"{path}: truncated plane ({len(blob)} of {length} bytes)")
        planes.append(decode_plane(CodedPlane.from_bytes(blob)))
        pos += length
    if pos != len(data):
        raise FormatError(f"{path}: {len(data) - pos} trailing bytes")
    return make_image(planes, desc.output_roles()), desc


def _descriptor_from_args(args, img: ColorImage) -> TransformDescriptor:
    name = args.transform
    if name == "none":
        return TransformDescriptor.identity()
    if name == "rdgdb":
        return TransformDescriptor.rdgdb()
    if name == "rct":
        return TransformDescriptor.rct()
    if name == "rdls-rdgdb":
        if args.w_dg is None or args.w_db is None:
            raise _UsageError("rdls-rdgdb requires --w-dg and --w-db")
        FilterSpec(args.w_dg)
        FilterSpec(args.w_db)
        return TransformDescriptor.rdls_rdgdb(args.w_dg, args.w_db)
    # auto: minimize MED-residual entropy, the strongest estimator
    return select_transform(img, "h0_pmed").descriptor()


class _UsageError(Exception):
    pass


def _cmd_transform(args) -> int:
    img = read_ppm(args.input)
    desc = _descriptor_from_args(args, img)
    out = apply_descriptor(img, desc)
    write_planar(out, desc, args.output)
    for role, p in zip(out.roles, out.planes):
        print(f"h0 {role} {entropy_h0(p):.6f}")
    return 0


def _cmd_inverse(args) -> int:
    img, desc = read_planar(args.input)
    write_ppm(invert_descriptor(img, desc), args.output)
    return 0


def _estimate_report_dict(path, img: ColorImage) -> dict:
    report = estimate_options(img)
    doc = {
        "schema": "rdls-estimate/1",
        "tool_version": __version__,
        "backend": _kernels.active_backend(),
        "input": {"path": str(path), "width": img.width, "height": img.height},
        "slots": {},
    }
    for slot in ("dg", "db"):
        entries = report.slot(slot)
        baseline = next(e for e in entries if e.option == "rdgdb")
        options = []
        for e in entries:
            d = e.to_dict()
            d["delta_pct"] = {
                m: percent_delta(e.metric(m), baseline.metric(m))
                for m in ("h0", "h0_pavg", "h0_pmed")
            }
            options.append(d)
        doc["slots"][slot] = {"baseline": "rdgdb", "options": options}
    return doc


def _cmd_estimate(args) -> int:
    img = read_ppm(args.input)
    doc = _estimate_report_dict(args.input, img)
    text = json.dumps(doc, indent=2)
    if args.json:
        Path(args.json).write_text(text + "\n")
    else:
        print(text)
    return 0


def _cmd_select(args) -> int:
    img = read_ppm(args.input)
    sel = select_transform(img, _METRIC_FLAGS[args.metric])
    doc = {
        "schema": "rdls-selection/1",
        "tool_version": __version__,
        "input": {"path": str(args.input), "width": img.width, "height": img.height},
    }
    doc.update(sel.to_dict())
    print(json.dumps(doc, indent=2))
    if args.apply:
        out, desc = apply_descriptor(img, sel.descriptor()), sel.descriptor()
        write_planar(out, desc, args.apply)
    return 0


def _cmd_compress(args) -> int:
    img = read_ppm(args.input)
    desc = _descriptor_from_args(args, img)
    out = apply_descriptor(img, desc)
    sizes = write_compressed(out, desc, args.output)
    pixels = img.width * img.height
    total = 0.0
    for role, size in zip(out.roles, sizes):
        bpp = 8.0 * size / pixels
        total += bpp
        print(f"bpp {role} {bpp:.6f}")
    print(f"bpp total {total:.6f}")
    return 0


def _cmd_decompress(args) -> int:
    img, desc = read_compressed(args.input)
    write_ppm(invert_descriptor(img, desc), args.output)
    return 0


def _cmd_noise(args) -> int:
    img = read_ppm(args.input)
    sr = args.sigma_r if args.sigma_r is not None else args.sigma
    sg = args.sigma_g if args.sigma_g is not None else args.sigma
    sb = args.sigma_b if args.sigma_b is not None else args.sigma
    write_ppm(add_awgn(img, sr, sg, sb, args.seed), args.output)
    return 0


def _cmd_bayer(args) -> int:
    write_ppm(bayer_rggb_to_rgb(read_pgm(args.input)), args.output)
    return 0


def _cmd_reduce3x(args) -> int:
    write_ppm(reduce3x(read_ppm(args.input)), args.output)
    return 0


def _best_denoised_bitrate(stack: np.ndarray, target: np.ndarray) -> tuple[float, int]:
    """Minimal coder bitrate over the weight sweep; ties prefer larger w."""
    best = None
    for i, w in enumerate(FILTER_WEIGHTS):
        bpp = measure_bitrate_array(stack[i] - target, -255, 255)
        key = (bpp, -w)
        if best is None or key < best[0]:
            best = (key, bpp, w)
    return best[1], best[2]


def series_rows(base: ColorImage, seed: int, sigmas=SERIES_SIGMAS) -> list[dict]:
    """Per-sigma internal-coder bitrates of primaries, differences, and the
    best-weight denoised differences. One noise field per seed, scaled by
    sigma, mirrors a fixed scene shot at increasing ISO."""
    rows = []
    weights = np.asarray(FILTER_WEIGHTS, dtype=np.int64)
    for sigma in sigmas:
        noisy = add_awgn(base, sigma, sigma, sigma, seed)
        r = noisy.plane("R").samples
        g = noisy.plane("G").samples
        b = noisy.plane("B").samples
        r_ddg, w_dg = _best_denoised_bitrate(_kernels.denoise_all(r, weights), g)
        r_ddb, w_db = _best_denoised_bitrate(_kernels.denoise_all(g, weights), b)
        rows.append(
            {
                "sigma": sigma,
                "r_r": measure_bitrate_array(r, 0, 255),
                "r_g": measure_bitrate_array(g, 0, 255),
                "r_b": measure_bitrate_array(b, 0, 255),
                "r_dg": measure_bitrate_array(r - g, -255, 255),
                "r_db": measure_bitrate_array(g - b, -255, 255),
                "r_ddg": r_ddg,
                "r_ddb": r_ddb,
                "w_dg": w_dg,
                "w_db": w_db,
            }
        )
    return rows


def _cmd_series(args) -> int:
    if args.base:
        base = read_ppm(args.base)
    else:
        base = make_correlated_scene(args.width, args.height, args.seed)
    rows = series_rows(base, args.seed)
    fields = ["sigma", "r_r", "r_g", "r_b", "r_dg", "r_db", "r_ddg", "r_ddb", "w_dg", "w_db"]
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v)
                             for k, v in row.items()})
    finally:
        if args.out:
            out.close()
    return 0


def _add_weight_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--w-dg", type=int, default=None,
                   help="denoising center weight for the Dg-slot step (power of two, 1..1024)")
    p.add_argument("--w-db", type=int, default=None,
                   help="denoising center weight for the Db-slot step (power of two, 1..1024)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdls",
        description="Reversible denoising-integrated lifting transforms for "
                    "lossless color image compression.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="transform a PPM into a planar file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--transform", required=True,
                   choices=["rdgdb", "rct", "rdls-rdgdb"])
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("inverse", help="restore the original PPM from a planar file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_inverse)

    p = sub.add_parser("estimate", help="13-option x 3-metric report per chrominance slot")
    p.add_argument("input")
    p.add_argument("--json", default=None, help="write the JSON report here instead of stdout")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("select", help="pick the minimal-estimator transform per slot")
    p.add_argument("input")
    p.add_argument("--metric", choices=sorted(_METRIC_FLAGS), default="med")
    p.add_argument("--apply", default=None, help="also write the transformed planar file here")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("compress", help="transform and losslessly code a PPM")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--transform", default="auto",
                   choices=["auto", "rdgdb", "rct", "rdls-rdgdb", "none"])
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("decompress", help="restore the original PPM from a compressed file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_decompress)

    p = sub.add_parser("noise", help="add seeded per-component Gaussian noise")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--sigma", type=float, default=0.0, help="sigma for all components")
    p.add_argument("--sigma-r", type=float, default=None)
    p.add_argument("--sigma-g", type=float, default=None)
    p.add_argument("--sigma-b", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_noise)

    p = sub.add_parser("bayer", help="RGGB mosaic PGM to half-resolution RGB PPM")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_bayer)

    p = sub.add_parser("reduce3x", help="downscale a PPM 3x by 3x3 block averaging")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_reduce3x)

    p = sub.add_parser("series", help="noise-sweep CSV of per-component coder bitrates")
    p.add_argument("--base", default=None, help="clean scene PPM (default: synthetic)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--height", type=int, default=128)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_series)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except (RdlsError, ValueError, OSError) as exc:
        print(f"rdls: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
