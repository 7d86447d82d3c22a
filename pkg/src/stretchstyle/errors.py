"""Exception types shared across the package.

The CLI maps these onto its exit-code contract, so raising the right
class matters more than the message text.
"""


class StretchStyleError(Exception):
    """Base class for all errors raised by this package."""


class ImageIOError(StretchStyleError):
    """A file could not be read or written."""


class UnsupportedImageError(ImageIOError):
    """The file decoded, but its bit depth or color type is not supported."""


class EmptyMaskError(StretchStyleError):
    """A mask with no true pixel was passed where an instance is required."""


class DimensionMismatchError(StretchStyleError):
    """Shapes of paired inputs (image/mask, tensor/record, box/image) disagree."""


class DegenerateIntervalError(StretchStyleError):
    """Interpolation interval has zero length (x0 == x1)."""


class TooManyPixelsError(StretchStyleError):
    """More pixels than available slot columns in a stretched row."""


class DegenerateFeaturesError(StretchStyleError):
    """Feature matrix has zero covariance; whitening is undefined."""


class RecordError(StretchStyleError):
    """A stretch record document is malformed or violates its invariants."""
