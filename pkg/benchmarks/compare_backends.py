#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on the same synthetic plane with both backends,
checks the outputs agree bit for bit, and prints timings plus speedups.

    python3 benchmarks/compare_backends.py [--size 512] [--repeats 5]
"""

import argparse
import time

import numpy as np

from rdls._kernels import common, numpy_impl

try:
    from rdls._kernels import numba_impl
except ImportError:
    numba_impl = None

WEIGHTS = np.asarray([1 << k for k in range(11)], dtype=np.int64)


def _time(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=512, help="plane side length")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    base = rng.integers(40, 216, (args.size, args.size), dtype=np.int64)
    noisy = np.clip(base + np.rint(rng.normal(0, 15, base.shape)).astype(np.int64), 0, 255)
    mid = common.mid_range(0, 255)

    encoded, _ = numpy_impl.encode_plane_bits(noisy, mid)
    h, w = noisy.shape

    kernels = {
        "denoise w=1": lambda impl: impl.denoise(noisy, 1),
        "denoise_all (11 weights)": lambda impl: impl.denoise_all(noisy, WEIGHTS),
        "med_residual": lambda impl: impl.med_residual(noisy, mid),
        "avg_residual": lambda impl: impl.avg_residual(noisy, mid),
        "encode_plane_bits": lambda impl: impl.encode_plane_bits(noisy, mid),
        "decode_plane_bits": lambda impl: impl.decode_plane_bits(encoded, w, h, mid, 0, 255),
    }

    if numba_impl is None:
        print("numba unavailable; timing the numpy backend only")
    else:
        for fn in kernels.values():  # JIT warmup outside the timed region
            fn(numba_impl)

    print(f"plane: {args.size}x{args.size}, best of {args.repeats} runs")
    header = f"{'kernel':<26} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fn in kernels.items():
        t_np, out_np = _time(lambda: fn(numpy_impl), args.repeats)
        if numba_impl is None:
            print(f"{name:<26} {t_np * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
            continue
        t_nb, out_nb = _time(lambda: fn(numba_impl), args.repeats)
        if isinstance(out_np, tuple):
            agree = all(
                np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
                for a, b in zip(out_np, out_nb)
            )
        else:
            agree = np.array_equal(out_np, out_nb)
        if not agree:
            raise SystemExit(f"backend mismatch in {name}")
        print(f"{name:<26} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>7.1f}x")
    print("all outputs bit-identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
