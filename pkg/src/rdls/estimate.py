"""Predictors, residual planes, memoryless entropy, and bitrate arithmetic.

These are the compression-independent measurements used to judge transform
options: the per-component memoryless entropy H0, the H0 of residual images
under the AVG and MED predictors, and optionally the internal coder's
bitrate. Boundary prediction rules (origin predicts mid-range, first row
predicts left, first column predicts above) affect estimator quality only,
not correctness, and are fixed here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .codec import measure_bitrate_array
from .core import ColorImage, FILTER_WEIGHTS, Plane, RGB_ROLES
from .errors import RoleError

METRICS = ("h0", "h0_pavg", "h0_pmed", "codec")


def _residual_plane(p: Plane, kernel) -> Plane:
    mid = _kernels.mid_range(p.min_value, p.max_value)
    out = kernel(p.samples, mid)
    out.flags.writeable = False
    span = p.max_value - p.min_value
    return Plane(p.width, p.height, -span, span, out)


def predict_avg(p: Plane) -> Plane:
    """Residual of the upper/left-average predictor, floor division."""
    return _residual_plane(p, _kernels.avg_residual)


def predict_med(p: Plane) -> Plane:
    """Residual of the median edge-detecting predictor (as in JPEG-LS)."""
    return _residual_plane(p, _kernels.med_residual)


def entropy_of_array(arr: np.ndarray) -> float:
    """Memoryless entropy in bits per sample over occurring values."""
    flat = arr.ravel()
    counts = np.bincount(flat - flat.min())
    counts = counts[counts > 0]
    p = counts / flat.size
    return float(-(p * np.log2(p)).sum()) + 0.0  # normalize -0.0


def entropy_h0(p: Plane) -> float:
    """H0 of a plane's sample histogram, in bits per pixel.

    Absent values contribute nothing; the alphabet size only bounds the
    result (log2 of the bounds span) and never changes the sum.
    """
    return entropy_of_array(p.samples)


def bitrate(compressed_bytes: int, pixel_count: int) -> float:
    """Bits per pixel for a compressed size: 8 * bytes / pixels."""
    if pixel_count < 1:
        raise ValueError(f"pixel count must be >= 1, got {pixel_count}")
    return 8.0 * compressed_bytes / pixel_count


@dataclass(frozen=True)
class OptionEstimate:
    """Metrics for one candidate component in a chrominance slot."""

    option: str  # "none" | "rdgdb" | "rdls"
    role: str
    w: int | None
    h0: float
    h0_pavg: float
    h0_pmed: float
    codec_bpp: float | None = None

    def metric(self, name: str) -> float:
        if name == "codec":
            if self.codec_bpp is None:
                raise ValueError("codec bitrate was not computed for this report")
            return self.codec_bpp
        if name not in ("h0", "h0_pavg", "h0_pmed"):
            raise ValueError(f"unknown metric {name!r}")
        return getattr(self, name)

    def to_dict(self) -> dict:
        return {
            "option": self.option,
            "role": self.role,
            "w": self.w,
            "h0": self.h0,
            "h0_pavg": self.h0_pavg,
            "h0_pmed": self.h0_pmed,
            "codec_bpp": self.codec_bpp,
        }


@dataclass(frozen=True)
class EstimateReport:
    """Per-slot option table: 1 untransformed + 1 difference + 11 denoised."""

    dg: tuple[OptionEstimate, ...]
    db: tuple[OptionEstimate, ...]

    def slot(self, name: str) -> tuple[OptionEstimate, ...]:
        if name == "dg":
            return self.dg
        if name == "db":
            return self.db
        raise ValueError(f"unknown slot {name!r}")

    def to_dict(self) -> dict:
        return {
            "dg": [e.to_dict() for e in self.dg],
            "db": [e.to_dict() for e in self.db],
        }


def _estimate_array(arr: np.ndarray, lo: int, hi: int, include_bitrate: bool):
    mid = _kernels.mid_range(lo, hi)
    h0 = entropy_of_array(arr)
    h0_pavg = entropy_of_array(_kernels.avg_residual(arr, mid))
    h0_pmed = entropy_of_array(_kernels.med_residual(arr, mid))
    bpp = measure_bitrate_array(arr, lo, hi) if include_bitrate else None
    return h0, h0_pavg, h0_pmed, bpp


def _slot_options(
    untransformed: np.ndarray,
    untransformed_role: str,
    diff: np.ndarray,
    diff_role: str,
    denoised_stack: np.ndarray,
    target: np.ndarray,
    rdls_role: str,
    include_bitrate: bool,
) -> tuple[OptionEstimate, ...]:
    entries = [
        OptionEstimate("none", untransformed_role, None,
                       *_estimate_array(untransformed, 0, 255, include_bitrate)),
        OptionEstimate("rdgdb", diff_role, None,
                       *_estimate_array(diff, -255, 255, include_bitrate)),
    ]
    for i, w in enumerate(FILTER_WEIGHTS):
        entries.append(
            OptionEstimate("rdls", rdls_role, w,
                           *_estimate_array(denoised_stack[i] - target, -255, 255,
                                            include_bitrate))
        )
    return tuple(entries)


def estimate_options(img: ColorImage, include_bitrate: bool = False) -> EstimateReport:
    """Evaluate every per-slot option of an untransformed RGB image.

    Dg slot candidates: G as-is, Dg = R - G, and dDg = denoise(R, w) - G for
    all 11 weights; Db slot likewise with B, Db = G - B, dDb. The weight
    sweeps reuse the shared window sums (denoise_all).
    """
    if img.roles != RGB_ROLES:
        raise RoleError(f"estimation needs an RGB image, got roles {img.roles}")
    r = img.plane("R").samples
    g = img.plane("G").samples
    b = img.plane("B").samples
    weights = np.asarray(FILTER_WEIGHTS, dtype=np.int64)
    dg = _slot_options(
        g, "G", r - g, "Dg", _kernels.denoise_all(r, weights), g, "dDg", include_bitrate
    )
    db = _slot_options(
        b, "B", g - b, "Db", _kernels.denoise_all(g, weights), b, "dDb", include_bitrate
    )
    return EstimateReport(dg=dg, db=db)


def percent_delta(new: float, baseline: float) -> float | None:
    """100 * (new - baseline) / baseline; negative means improvement.

    None when the baseline is zero and the values differ (the ratio is
    undefined); 0.0 when both are zero.
    """
    if baseline == 0.0:
        return 0.0 if new == 0.0 else None
    return 100.0 * (new - baseline) / baseline
