"""Concrete reversible transforms as lifting sequences.

RDgDb keeps R and replaces G, B by the differences Dg = R - G, Db = G - B.
RCT is the lifting form of the JPEG 2000 reversible component transform.
The denoising-integrated variant computes the same differences against
denoised companions: dDb = denoise(G, w_db) - B, then dDg =
denoise(R, w_dg) - G, with G still untransformed when both are computed
(step order matters and is fixed).

All differences share one orientation, (companion) - (target), which is the
self-inverse combine -a + b. On constant planes denoising is the identity,
so the denoised transform degenerates to RDgDb exactly, with no sign flip.
"""

from __future__ import annotations

from .core import (
    ColorImage,
    FilterSpec,
    RGB_ROLES,
    SlotChoice,
    TransformDescriptor,
    TransformKind,
)
from .errors import RoleError
from .lifting import Combine, LiftSequence, LiftStep, Mixer, apply_forward, apply_inverse

_CHROMA = (-255, 255)
_PRIMARY = (0, 255)


def _db_step(choice: SlotChoice) -> LiftStep:
    # step on plane 2: B -> Db or dDb, mixing (possibly denoised) G
    if choice.option == "none":
        return LiftStep.identity(2, "B", _PRIMARY)
    role = "Db" if choice.option == "rdgdb" else "dDb"
    return LiftStep(
        target=2,
        combine=Combine.SUB_FROM,
        mixer=Mixer.select(1),
        denoise_specs=(None, choice.filter_spec),
        in_role="B",
        out_role=role,
        in_bounds=_PRIMARY,
        out_bounds=_CHROMA,
    )


def _dg_step(choice: SlotChoice) -> LiftStep:
    # step on plane 1: G -> Dg or dDg, mixing (possibly denoised) R
    if choice.option == "none":
        return LiftStep.identity(1, "G", _PRIMARY)
    role = "Dg" if choice.option == "rdgdb" else "dDg"
    return LiftStep(
        target=1,
        combine=Combine.SUB_FROM,
        mixer=Mixer.select(0),
        denoise_specs=(choice.filter_spec, None),
        in_role="G",
        out_role=role,
        in_bounds=_PRIMARY,
        out_bounds=_CHROMA,
    )


def difference_sequence(dg: SlotChoice, db: SlotChoice) -> LiftSequence:
    """Db-slot step first, Dg-slot step second, relabeling step on R last."""
    return LiftSequence(
        steps=(_db_step(db), _dg_step(dg), LiftStep.identity(0, "R", _PRIMARY)),
        input_roles=RGB_ROLES,
    )


def rct_sequence() -> LiftSequence:
    return LiftSequence(
        steps=(
            LiftStep(2, Combine.ADD, Mixer.negate(1), (None, None), "B", "Cu", _PRIMARY, _CHROMA),
            LiftStep(0, Combine.ADD, Mixer.negate(0), (None, None), "R", "Cv", _PRIMARY, _CHROMA),
            LiftStep(1, Combine.ADD, Mixer.quarter_floor_sum(), (None, None), "G", "Y", _PRIMARY, _PRIMARY),
        ),
        input_roles=RGB_ROLES,
    )


# Plane storage order after the RCT steps is (Cv, Y, Cu); present as (Y, Cu, Cv).
_RCT_STORAGE_ROLES = ("Cv", "Y", "Cu")
_RCT_ROLES = ("Y", "Cu", "Cv")


def rdgdb_forward(img: ColorImage) -> ColorImage:
    """Per pixel: Db = G - B (first, from untransformed G), Dg = R - G.

    Costs exactly two integer subtractions per pixel.
    """
    return apply_forward(img, difference_sequence(SlotChoice("rdgdb"), SlotChoice("rdgdb")))


def rdgdb_inverse(img: ColorImage) -> ColorImage:
    return apply_inverse(img, difference_sequence(SlotChoice("rdgdb"), SlotChoice("rdgdb")))


def rct_forward(img: ColorImage) -> ColorImage:
    """Cu = B - G; Cv = R - G; Y = G + floor((Cu + Cv) / 4)."""
    return apply_forward(img, rct_sequence()).reordered(_RCT_ROLES)


def rct_inverse(img: ColorImage) -> ColorImage:
    if img.roles != _RCT_ROLES:
        raise RoleError(f"expected roles {_RCT_ROLES}, got {img.roles}")
    return apply_inverse(img.reordered(_RCT_STORAGE_ROLES), rct_sequence())


def rdls_rdgdb_forward(img: ColorImage, w_db: FilterSpec, w_dg: FilterSpec) -> ColorImage:
    """Denoising-integrated RDgDb: dDb = denoise(G) - B, dDg = denoise(R) - G."""
    seq = difference_sequence(
        SlotChoice("rdls", w_dg.center_weight), SlotChoice("rdls", w_db.center_weight)
    )
    return apply_forward(img, seq)


def rdls_rdgdb_inverse(img: ColorImage, w_db: FilterSpec, w_dg: FilterSpec) -> ColorImage:
    """Restore G = denoise(R) - dDg first, then B = denoise(G) - dDb.

    The restored G feeds the second denoising, reproducing the forward
    filter output exactly; wrong weights surface as a range violation.
    """
    seq = difference_sequence(
        SlotChoice("rdls", w_dg.center_weight), SlotChoice("rdls", w_db.center_weight)
    )
    return apply_inverse(img, seq)


def sequence_for(desc: TransformDescriptor) -> LiftSequence:
    if desc.kind is TransformKind.RCT:
        return rct_sequence()
    return difference_sequence(desc.dg, desc.db)


def apply_descriptor(img: ColorImage, desc: TransformDescriptor) -> ColorImage:
    """Forward transform for any descriptor, including mixed selections."""
    out = apply_forward(img, sequence_for(desc))
    if desc.kind is TransformKind.RCT:
        out = out.reordered(_RCT_ROLES)
    return out


def invert_descriptor(img: ColorImage, desc: TransformDescriptor) -> ColorImage:
    if desc.kind is TransformKind.RCT:
        if img.roles != _RCT_ROLES:
            raise RoleError(f"expected roles {_RCT_ROLES}, got {img.roles}")
        img = img.reordered(_RCT_STORAGE_ROLES)
    return apply_inverse(img, sequence_for(desc))
