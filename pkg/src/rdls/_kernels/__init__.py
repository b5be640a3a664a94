"""Kernel backend selection.

Hot per-pixel loops (denoising, prediction, Golomb-Rice coding) have two
interchangeable implementations: numba-compiled and pure numpy/Python.
``RDLS_BACKEND`` picks one explicitly ("numba" or "numpy"); unset or
"auto" uses numba when importable and falls back to numpy otherwise.
Both produce bit-identical results; benchmarks/compare_backends.py
measures the difference.

``RDLS_THREADS`` (0 = auto) caps the numba thread pool for any threaded
kernels; outputs never depend on it.
"""

from __future__ import annotations

import os

from . import numpy_impl
from .common import (
    DECODE_OK,
    DECODE_RANGE,
    DECODE_TRAILING,
    DECODE_TRUNCATED,
    mid_range,
)

_requested = (os.environ.get("RDLS_BACKEND") or "auto").strip().lower() or "auto"

if _requested == "numpy":
    _impl = numpy_impl
    _ACTIVE = "numpy"
elif _requested in ("auto", "numba"):
    try:
        from . import numba_impl as _impl  # type: ignore[no-redef]

        _ACTIVE = "numba"
    except ImportError:
        if _requested == "numba":
            raise ImportError(
                "RDLS_BACKEND=numba but numba could not be imported"
            ) from None
        _impl = numpy_impl
        _ACTIVE = "numpy"
else:
    raise ValueError(
        f"unknown RDLS_BACKEND {_requested!r}; expected 'numba', 'numpy' or 'auto'"
    )


def _configure_threads() -> None:
    raw = (os.environ.get("RDLS_THREADS") or "0").strip()
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"RDLS_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"RDLS_THREADS must be >= 0, got {n}")
    if n > 0 and _ACTIVE == "numba":
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


_configure_threads()


def active_backend() -> str:
    return _ACTIVE


denoise = _impl.denoise
denoise_all = _impl.denoise_all
med_residual = _impl.med_residual
avg_residual = _impl.avg_residual
encode_plane_bits = _impl.encode_plane_bits
decode_plane_bits = _impl.decode_plane_bits
