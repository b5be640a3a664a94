"""Generic engine for sequences of reversible (denoising and) lifting steps.

A step modifies exactly one of the three planes by combining it with a
deterministic per-pixel function of the other planes, which may first be
denoised. Steps run in the step-by-step regime: a step is applied to every
pixel before the next step starts, and denoised planes are computed from
the current state at that step and discarded afterwards. Inversion applies
the steps' inverses in opposite order with the same filters; because the
mixer never reads the target plane, it sees identical inputs both ways,
which makes the round trip exact despite lossy denoising.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .core import ColorImage, FilterSpec, Plane, make_image
from .denoise import denoise_array
from .errors import LiftingConsistencyError, ReconstructionError, RoleError


class Combine(Enum):
    # a (+) b = -a + b; self-inverse
    SUB_FROM = "sub_from"
    # a (+) b = a + b; inverse a - b
    ADD = "add"
    # pure relabeling step, no arithmetic
    IDENTITY = "identity"


@dataclass(frozen=True)
class Mixer:
    """Per-pixel function of the non-target planes, with its op count.

    ``fn`` receives the two non-target plane arrays in plane-index order
    and returns an array; ``pixel_ops`` is the number of integer arithmetic
    operations it costs per pixel (for the op-count harness).
    """

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    pixel_ops: int
    name: str

    @staticmethod
    def select(i: int) -> "Mixer":
        return Mixer(lambda *ps: ps[i], 0, f"select{i}")

    @staticmethod
    def negate(i: int) -> "Mixer":
        return Mixer(lambda *ps: -ps[i], 1, f"negate{i}")

    @staticmethod
    def quarter_floor_sum() -> "Mixer":
        # floor toward -inf, as in numpy's integer floor division
        return Mixer(lambda a, b: (a + b) // 4, 2, "quarter_floor_sum")


@dataclass(frozen=True)
class LiftStep:
    """One reversible step: which plane, how to combine, what to mix.

    ``denoise_specs`` gives a FilterSpec per non-target plane (in plane
    index order) or None for planes used raw. The mixer can never see the
    target plane, by construction. Bounds are declared per step so the
    engine can detect inconsistent declarations (forward) and invalid
    inputs (inverse).
    """

    target: int
    combine: Combine
    mixer: Mixer | None
    denoise_specs: tuple[FilterSpec | None, FilterSpec | None]
    in_role: str
    out_role: str
    in_bounds: tuple[int, int]
    out_bounds: tuple[int, int]

    @staticmethod
    def identity(target: int, role: str, bounds: tuple[int, int]) -> "LiftStep":
        return LiftStep(target, Combine.IDENTITY, None, (None, None), role, role, bounds, bounds)


@dataclass(frozen=True)
class LiftSequence:
    steps: tuple[LiftStep, ...]
    input_roles: tuple[str, str, str]

    def output_roles(self) -> tuple[str, str, str]:
        roles = list(self.input_roles)
        for s in self.steps:
            roles[s.target] = s.out_role
        return tuple(roles)  # type: ignore[return-value]


class _OpCounter:
    def __init__(self):
        self.pixel_ops = 0


_counter: _OpCounter | None = None


@contextmanager
def count_pixel_ops():
    """Tally integer arithmetic ops per pixel spent in lifting combines and
    mixers (denoising excluded). Debugging aid for complexity claims."""
    global _counter
    prev = _counter
    _counter = _OpCounter()
    try:
        yield _counter
    finally:
        _counter = prev


def _mixer_inputs(planes: list[np.ndarray], step: LiftStep) -> list[np.ndarray]:
    args = []
    others = [i for i in range(3) if i != step.target]
    for spec, idx in zip(step.denoise_specs, others):
        arr = planes[idx]
        if spec is not None:
            arr = denoise_array(arr, spec.center_weight)
        args.append(arr)
    return args


def _check_roles(img: ColorImage, expected: tuple[str, str, str]) -> None:
    if img.roles != expected:
        raise RoleError(f"expected roles {expected}, got {img.roles}")


def apply_forward(img: ColorImage, seq: LiftSequence) -> ColorImage:
    """Run all steps in order, each over every pixel before the next."""
    _check_roles(img, seq.input_roles)
    planes = [p.samples for p in img.planes]
    bounds = [(p.min_value, p.max_value) for p in img.planes]
    for step in seq.steps:
        if step.combine is Combine.IDENTITY:
            continue
        f = step.mixer.fn(*_mixer_inputs(planes, step))
        if step.combine is Combine.SUB_FROM:
            new = f - planes[step.target]
        else:
            new = planes[step.target] + f
        lo, hi = step.out_bounds
        if new.min() < lo or new.max() > hi:
            raise LiftingConsistencyError(
                f"step producing {step.out_role!r} left declared bounds "
                f"[{lo}, {hi}]: got [{int(new.min())}, {int(new.max())}]"
            )
        if _counter is not None:
            _counter.pixel_ops += 1 + step.mixer.pixel_ops
        planes[step.target] = new
        bounds[step.target] = step.out_bounds
    out = []
    for arr, (lo, hi), orig in zip(planes, bounds, img.planes):
        if arr is orig.samples:
            out.append(orig)
        else:
            arr.flags.writeable = False
            out.append(Plane(orig.width, orig.height, lo, hi, arr))
    return make_image(out, seq.output_roles())


def apply_inverse(img: ColorImage, seq: LiftSequence) -> ColorImage:
    """Undo apply_forward: inverse steps in opposite order, same filters."""
    _check_roles(img, seq.output_roles())
    planes = [p.samples for p in img.planes]
    bounds = [(p.min_value, p.max_value) for p in img.planes]
    for step in reversed(seq.steps):
        if step.combine is Combine.IDENTITY:
            continue
        f = step.mixer.fn(*_mixer_inputs(planes, step))
        if step.combine is Combine.SUB_FROM:
            old = f - planes[step.target]
        else:
            old = planes[step.target] - f
        lo, hi = step.in_bounds
        if old.min() < lo or old.max() > hi:
            raise ReconstructionError(
                f"not a valid {step.out_role!r} component for this transform: "
                f"restoring {step.in_role!r} gave values outside [{lo}, {hi}]"
            )
        planes[step.target] = old
        bounds[step.target] = step.in_bounds
    out = []
    for arr, (lo, hi), orig in zip(planes, bounds, img.planes):
        if arr is orig.samples:
            out.append(orig)
        else:
            arr.flags.writeable = False
            out.append(Plane(orig.width, orig.height, lo, hi, arr))
    return make_image(out, seq.input_roles)
