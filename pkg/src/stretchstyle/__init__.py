"""Arbitrary-instance style transfer.

A masked, irregularly shaped instance is stretched row by row into a
dense rectangle, restyled by matching feature covariances across an
exactly invertible multiscale codec, stretched back into place, and
composited over the untouched content image.
"""

from .codec import LevelFeatures, PadRecord, decode, encode, pad_to_depth, unpad
from .errors import (
    DegenerateFeaturesError,
    DegenerateIntervalError,
    DimensionMismatchError,
    EmptyMaskError,
    ImageIOError,
    RecordError,
    StretchStyleError,
    TooManyPixelsError,
    UnsupportedImageError,
)
from .raster import PackingBox, bounding_box, crop, load_image, load_mask, save_image
from .stretching import (
    EmptyRow,
    OccupiedRow,
    StretchRecord,
    backward_stretch,
    forward_stretch,
    instance_mask,
    lerp,
    read_record,
    slot_positions,
    write_record,
)
from .transfer import (
    InstanceStylizer,
    composite,
    style_level_stats,
    stylize_instance,
    stylize_stretched,
)
from .wct import (
    EigenPair,
    StyleStats,
    WhiteningColoring,
    blend,
    capture_style,
    color,
    covariance,
    mean_center,
    sym_eig,
    whiten,
    wct_transfer,
)

__version__ = "0.1.0"
