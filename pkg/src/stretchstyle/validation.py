"""Input validation helpers.

Images are float64 arrays of shape (height, width, channels); masks are
bool arrays of shape (height, width). These helpers coerce array-likes
into those layouts and fail loudly on anything else, so the numeric
modules can assume clean inputs.
"""

import numpy as np

from .errors import DimensionMismatchError, EmptyMaskError


def as_image(x, name="image") -> np.ndarray:
    """Coerce to a finite float64 (H, W, C) array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 3:
        raise ValueError(f"{name} must have shape (height, width, channels), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1 or arr.shape[2] < 1:
        raise ValueError(f"{name} has an empty axis: {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite samples")
    return arr


def as_mask(x, name="mask") -> np.ndarray:
    """Coerce to a bool (H, W) array."""
    arr = np.asarray(x)
    if arr.ndim != 2:
        raise ValueError(f"{name} must have shape (height, width), got {arr.shape}")
    return arr.astype(bool, copy=False)


def as_features(x, name="features") -> np.ndarray:
    """Coerce to a finite float64 (channels, samples) matrix."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must have shape (channels, samples), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} has an empty axis: {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_image_mask_pair(image: np.ndarray, mask: np.ndarray) -> None:
    if image.shape[:2] != mask.shape:
        raise DimensionMismatchError(
            f"image is {image.shape[0]}x{image.shape[1]} but mask is {mask.shape[0]}x{mask.shape[1]}"
        )


def check_nonempty(mask: np.ndarray) -> None:
    if not mask.any():
        raise EmptyMaskError("mask has no true pixel")


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    return alpha


def check_levels(levels: int) -> int:
    levels = int(levels)
    if not 1 <= levels <= 5:
        raise ValueError(f"levels must be in 1..5, got {levels}")
    return levels
