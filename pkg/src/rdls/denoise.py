"""Weighted 3x3 averaging filter used inside the denoising lifting steps.

The output pixel is round((w * center + sum of in-bounds neighbors) /
(w + neighbor count)) with ties rounded away from zero. At image edges the
window shrinks to the pixels that exist; there is no padding or reflection.
All arithmetic is exact integers, so results are identical across runs,
platforms, and backends, which the reversible transforms depend on.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .core import FILTER_WEIGHTS, FilterSpec, Plane

_DENOISE_MIN, _DENOISE_MAX = -511, 511


def _check_input(p: Plane) -> None:
    if p.min_value < _DENOISE_MIN or p.max_value > _DENOISE_MAX:
        raise ValueError(
            f"denoise input bounds [{p.min_value}, {p.max_value}] exceed "
            f"[{_DENOISE_MIN}, {_DENOISE_MAX}]"
        )


def denoise_array(src: np.ndarray, w: int) -> np.ndarray:
    """Filter a raw int64 array; used by the lifting engine."""
    return _kernels.denoise(src, w)


def denoise_plane(p: Plane, f: FilterSpec) -> Plane:
    """Denoised copy of a plane. Output bounds equal input bounds.

    A weighted mean of in-range values stays in range, so no clamping is
    needed (or allowed: clamping would not be reproduced by the inverse).
    """
    _check_input(p)
    out = _kernels.denoise(p.samples, f.center_weight)
    out.flags.writeable = False
    return Plane(p.width, p.height, p.min_value, p.max_value, out)


def denoise_plane_all_weights(p: Plane) -> list[Plane]:
    """Denoised planes for w = 1, 2, ..., 1024 in order.

    Equivalent to 11 denoise_plane calls bit for bit, but the 3x3 window
    sums are computed once and reused across weights.
    """
    _check_input(p)
    stack = _kernels.denoise_all(p.samples, np.asarray(FILTER_WEIGHTS, dtype=np.int64))
    planes = []
    for i in range(len(FILTER_WEIGHTS)):
        arr = np.ascontiguousarray(stack[i])
        arr.flags.writeable = False
        planes.append(Plane(p.width, p.height, p.min_value, p.max_value, arr))
    return planes
