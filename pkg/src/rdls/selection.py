"""Per-slot transform selection by minimal estimator value.

For each chrominance slot the candidates are: keep the component, replace
it by the plain difference, or by the denoised difference at one of the 11
filter weights. The chosen estimator (component H0, AVG-residual H0,
MED-residual H0, or the internal coder's bitrate) is minimized per slot;
ties break toward the cheaper option (untransformed, then plain
difference, then denoised) and, among denoised options, toward the larger
weight (weaker filtering).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ColorImage, SlotChoice, TransformDescriptor
from .estimate import EstimateReport, METRICS, OptionEstimate, estimate_options
from .transforms import apply_descriptor

_COMPLEXITY = {"none": 0, "rdgdb": 1, "rdls": 2}


@dataclass(frozen=True)
class SlotSelection:
    choice: SlotChoice
    metric_value: float
    ranking: tuple[OptionEstimate, ...]  # best first

    def to_dict(self) -> dict:
        return {
            "option": self.choice.option,
            "w": self.choice.w,
            "value": self.metric_value,
            "ranking": [e.to_dict() for e in self.ranking],
        }


@dataclass(frozen=True)
class Selection:
    metric: str
    dg: SlotSelection
    db: SlotSelection

    def descriptor(self) -> TransformDescriptor:
        return TransformDescriptor.from_slots(self.dg.choice, self.db.choice)

    def to_dict(self) -> dict:
        return {"metric": self.metric, "dg": self.dg.to_dict(), "db": self.db.to_dict()}


def _rank_key(e: OptionEstimate, metric: str):
    return (e.metric(metric), _COMPLEXITY[e.option], -(e.w or 0))


def rank_slot(entries: tuple[OptionEstimate, ...], metric: str) -> SlotSelection:
    ranking = tuple(sorted(entries, key=lambda e: _rank_key(e, metric)))
    best = ranking[0]
    return SlotSelection(
        choice=SlotChoice(best.option, best.w),
        metric_value=best.metric(metric),
        ranking=ranking,
    )


def select_from_report(report: EstimateReport, metric: str) -> Selection:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    return Selection(
        metric=metric,
        dg=rank_slot(report.dg, metric),
        db=rank_slot(report.db, metric),
    )


def select_transform(img: ColorImage, metric: str = "h0_pmed") -> Selection:
    """Pick the minimal-estimator option per slot for an RGB image."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    report = estimate_options(img, include_bitrate=(metric == "codec"))
    return select_from_report(report, metric)


def apply_selection(img: ColorImage, sel: Selection) -> tuple[ColorImage, TransformDescriptor]:
    """Materialize a selection into one output image plus its descriptor.

    Slot choices may differ (mixed descriptors); step order is fixed so a
    G-based Db-slot option always reads the untransformed G.
    """
    desc = sel.descriptor()
    return apply_descriptor(img, desc), desc
