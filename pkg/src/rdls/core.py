"""Core value types: planes, color images, filter specs, transform descriptors.

All sample data is exact signed integer; nothing in the package touches
floating point on the reversible paths. Planes are immutable after
construction (the backing array is marked read-only) and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import BoundsError, RoleError

# Roles a plane may carry. Plane order in a ColorImage is meaningful:
# slot 0 holds R/Cv-lineage data, slot 1 the Dg slot, slot 2 the Db slot.
ROLES = frozenset({"R", "G", "B", "Dg", "Db", "dDg", "dDb", "Y", "Cu", "Cv"})

RGB_ROLES = ("R", "G", "B")

# Valid center weights for the denoising filter: powers of two, 1..1024.
FILTER_WEIGHTS = tuple(1 << k for k in range(11))


@dataclass(frozen=True)
class Plane:
    """One image component: dimensions, inclusive sample bounds, samples.

    ``samples`` is a read-only (height, width) int64 array. Untransformed
    8-bit components use bounds [0, 255]; difference chrominances use
    [-255, 255]; prediction residuals may reach [-510, 510].
    """

    width: int
    height: int
    min_value: int
    max_value: int
    samples: np.ndarray = field(repr=False)


def make_plane(
    width: int,
    height: int,
    min_value: int,
    max_value: int,
    samples: Sequence[int] | np.ndarray,
) -> Plane:
    """Validate and build a Plane from row-major samples.

    Raises ValueError on dimension mismatch and BoundsError (with the index
    and value of the first offender) when a sample is out of bounds.
    """
    if width < 1 or height < 1:
        raise ValueError(f"plane dimensions must be >= 1, got {width}x{height}")
    if min_value > max_value:
        raise ValueError(f"empty bounds [{min_value}, {max_value}]")
    arr = np.asarray(samples, dtype=np.int64)
    if arr.ndim == 1:
        if arr.size != width * height:
            raise ValueError(
                f"dimension mismatch: expected {width * height} samples "
                f"for {width}x{height}, got {arr.size}"
            )
        arr = arr.reshape(height, width)
    elif arr.shape != (height, width):
        raise ValueError(
            f"dimension mismatch: expected shape {(height, width)}, got {arr.shape}"
        )
    else:
        arr = arr.copy()
    bad = (arr < min_value) | (arr > max_value)
    if bad.any():
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise BoundsError(
            f"sample out of bounds at index {idx}: value {int(arr.ravel()[idx])} "
            f"not in [{min_value}, {max_value}]"
        )
    arr.flags.writeable = False
    return Plane(width, height, int(min_value), int(max_value), arr)


def plane_from_array(arr: np.ndarray, min_value: int, max_value: int) -> Plane:
    """Build a Plane from a 2D array, validating bounds."""
    h, w = arr.shape
    return make_plane(w, h, min_value, max_value, arr)


def constant_plane(width: int, height: int, value: int, min_value: int = 0, max_value: int = 255) -> Plane:
    return make_plane(
        width, height, min_value, max_value,
        np.full((height, width), value, dtype=np.int64),
    )


def plane_equal(a: Plane, b: Plane) -> bool:
    """True iff dimensions, bounds, and every sample are identical."""
    return (
        a.width == b.width
        and a.height == b.height
        and a.min_value == b.min_value
        and a.max_value == b.max_value
        and bool(np.array_equal(a.samples, b.samples))
    )


@dataclass(frozen=True)
class ColorImage:
    """Three equally sized planes with role labels.

    Roles travel with the planes so an inverse transform needs no external
    context. Plane order is positional: index 1 is the Dg slot, index 2 the
    Db slot for the difference transforms.
    """

    planes: tuple[Plane, Plane, Plane]
    roles: tuple[str, str, str]

    @property
    def width(self) -> int:
        return self.planes[0].width

    @property
    def height(self) -> int:
        return self.planes[0].height

    def plane(self, role: str) -> Plane:
        """Look up a plane by its role tag."""
        try:
            return self.planes[self.roles.index(role)]
        except ValueError:
            raise RoleError(f"image has roles {self.roles}, no {role!r}") from None

    def reordered(self, roles: tuple[str, str, str]) -> "ColorImage":
        """Same planes presented in a different role order."""
        return make_image(tuple(self.plane(r) for r in roles), roles)


def make_image(planes: Iterable[Plane], roles: Iterable[str]) -> ColorImage:
    planes = tuple(planes)
    roles = tuple(roles)
    if len(planes) != 3 or len(roles) != 3:
        raise ValueError("a ColorImage has exactly 3 planes and 3 roles")
    unknown = set(roles) - ROLES
    if unknown:
        raise RoleError(f"unknown roles {sorted(unknown)}")
    if len(set(roles)) != 3:
        raise RoleError(f"duplicate roles {roles}")
    w, h = planes[0].width, planes[0].height
    for p in planes[1:]:
        if p.width != w or p.height != h:
            raise ValueError(
                f"plane dimensions differ: {w}x{h} vs {p.width}x{p.height}"
            )
    return ColorImage(planes, roles)  # type: ignore[arg-type]


def rgb_image(r: np.ndarray, g: np.ndarray, b: np.ndarray) -> ColorImage:
    """Build an untransformed 8-bit RGB image from three arrays."""
    return make_image(
        (plane_from_array(r, 0, 255), plane_from_array(g, 0, 255), plane_from_array(b, 0, 255)),
        RGB_ROLES,
    )


@dataclass(frozen=True)
class FilterSpec:
    """Denoising filter description: fixed 3x3 window, integer center weight.

    The center weight must be a power of two between 1 and 1024; neighbor
    weights are fixed at 1. Larger weights mean weaker denoising.
    """

    center_weight: int

    def __post_init__(self):
        if self.center_weight not in FILTER_WEIGHTS:
            raise ValueError(
                f"center weight must be a power of two in [1, 1024], "
                f"got {self.center_weight}"
            )


class TransformKind(Enum):
    IDENTITY = "identity"
    RDGDB = "rdgdb"
    RCT = "rct"
    RDLS_RDGDB = "rdls-rdgdb"
    # Per-slot mixtures of {none, rdgdb, rdls} arising from auto-selection.
    MIXED = "mixed"


@dataclass(frozen=True)
class SlotChoice:
    """Per-chrominance-slot option: keep the component, difference it, or
    difference it against a denoised companion."""

    option: str  # "none" | "rdgdb" | "rdls"
    w: int | None = None

    def __post_init__(self):
        if self.option not in ("none", "rdgdb", "rdls"):
            raise ValueError(f"unknown slot option {self.option!r}")
        if self.option == "rdls":
            if self.w is None:
                raise ValueError("rdls slot choice requires a filter weight")
            FilterSpec(self.w)  # validates
        elif self.w is not None:
            raise ValueError(f"slot option {self.option!r} takes no filter weight")

    @property
    def filter_spec(self) -> FilterSpec | None:
        return FilterSpec(self.w) if self.option == "rdls" else None


_NONE_CHOICE = SlotChoice("none")
_RDGDB_CHOICE = SlotChoice("rdgdb")


@dataclass(frozen=True)
class TransformDescriptor:
    """Which transform an image went through, with enough detail to invert it.

    RDLS-RDgDb carries both filter weights (w_db for the step producing dDb,
    w_dg for the step producing dDg); the other named kinds carry none.
    MIXED records an independent choice per chrominance slot.
    """

    kind: TransformKind
    dg: SlotChoice = _NONE_CHOICE
    db: SlotChoice = _NONE_CHOICE

    def __post_init__(self):
        expect = {
            TransformKind.IDENTITY: ("none", "none"),
            TransformKind.RDGDB: ("rdgdb", "rdgdb"),
            TransformKind.RCT: ("none", "none"),
            TransformKind.RDLS_RDGDB: ("rdls", "rdls"),
        }.get(self.kind)
        if expect is not None and (self.dg.option, self.db.option) != expect:
            raise ValueError(
                f"{self.kind.value} descriptor is inconsistent with slot "
                f"choices ({self.dg.option}, {self.db.option})"
            )

    @staticmethod
    def identity() -> "TransformDescriptor":
        return TransformDescriptor(TransformKind.IDENTITY)

    @staticmethod
    def rdgdb() -> "TransformDescriptor":
        return TransformDescriptor(TransformKind.RDGDB, _RDGDB_CHOICE, _RDGDB_CHOICE)

    @staticmethod
    def rct() -> "TransformDescriptor":
        return TransformDescriptor(TransformKind.RCT)

    @staticmethod
    def rdls_rdgdb(w_dg: int, w_db: int) -> "TransformDescriptor":
        return TransformDescriptor(
            TransformKind.RDLS_RDGDB, SlotChoice("rdls", w_dg), SlotChoice("rdls", w_db)
        )

    @staticmethod
    def from_slots(dg: SlotChoice, db: SlotChoice) -> "TransformDescriptor":
        """Canonicalize a per-slot pair into the narrowest descriptor kind."""
        pair = (dg.option, db.option)
        if pair == ("none", "none"):
            return TransformDescriptor.identity()
        if pair == ("rdgdb", "rdgdb"):
            return TransformDescriptor.rdgdb()
        if pair == ("rdls", "rdls"):
            return TransformDescriptor(TransformKind.RDLS_RDGDB, dg, db)
        return TransformDescriptor(TransformKind.MIXED, dg, db)

    def output_roles(self) -> tuple[str, str, str]:
        if self.kind is TransformKind.RCT:
            return ("Y", "Cu", "Cv")
        dg_role = {"none": "G", "rdgdb": "Dg", "rdls": "dDg"}[self.dg.option]
        db_role = {"none": "B", "rdgdb": "Db", "rdls": "dDb"}[self.db.option]
        return ("R", dg_role, db_role)
