"""Reversible denoising-integrated lifting transforms for lossless color
image compression, with entropy/predictor estimators, automatic transform
selection, and an internal predictive coder for end-to-end bitrates."""

__version__ = "0.1.0"

from .core import (
    ColorImage,
    FILTER_WEIGHTS,
    FilterSpec,
    Plane,
    SlotChoice,
    TransformDescriptor,
    TransformKind,
    constant_plane,
    make_image,
    make_plane,
    plane_equal,
    plane_from_array,
    rgb_image,
)
from .denoise import denoise_plane, denoise_plane_all_weights
from .errors import (
    BoundsError,
    DecodeError,
    FormatError,
    LiftingConsistencyError,
    RdlsError,
    ReconstructionError,
    RoleError,
)
from .estimate import (
    EstimateReport,
    OptionEstimate,
    bitrate,
    entropy_h0,
    estimate_options,
    predict_avg,
    predict_med,
)
from .lifting import LiftSequence, LiftStep, apply_forward, apply_inverse
from .selection import Selection, apply_selection, select_transform
from .transforms import (
    apply_descriptor,
    invert_descriptor,
    rct_forward,
    rct_inverse,
    rdgdb_forward,
    rdgdb_inverse,
    rdls_rdgdb_forward,
    rdls_rdgdb_inverse,
)

__all__ = [
    "__version__",
    "BoundsError",
    "ColorImage",
    "DecodeError",
    "EstimateReport",
    "FILTER_WEIGHTS",
    "FilterSpec",
    "FormatError",
    "LiftSequence",
    "LiftStep",
    "LiftingConsistencyError",
    "OptionEstimate",
    "Plane",
    "RdlsError",
    "ReconstructionError",
    "RoleError",
    "Selection",
    "SlotChoice",
    "TransformDescriptor",
    "TransformKind",
    "apply_descriptor",
    "apply_forward",
    "apply_inverse",
    "apply_selection",
    "bitrate",
    "constant_plane",
    "denoise_plane",
    "denoise_plane_all_weights",
    "entropy_h0",
    "estimate_options",
    "invert_descriptor",
    "make_image",
    "make_plane",
    "plane_equal",
    "plane_from_array",
    "predict_avg",
    "predict_med",
    "rct_forward",
    "rct_inverse",
    "rdgdb_forward",
    "rdgdb_inverse",
    "rdls_rdgdb_forward",
    "rdls_rdgdb_inverse",
    "rgb_image",
    "select_transform",
]
