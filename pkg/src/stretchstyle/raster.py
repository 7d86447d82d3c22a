"""Raster primitives: PNG ingestion/emission, packing boxes, cropping.

Pixel convention: x is the column index, y is the row index, origin at
the top-left. Samples live in [0, 1] as float64 inside the pipeline;
8-bit quantization happens only at the file boundary, with round-half-up.
"""

import numpy as np
from PIL import Image, UnidentifiedImageError
from dataclasses import dataclass

from .errors import DimensionMismatchError, ImageIOError, UnsupportedImageError
from .validation import as_image, as_mask, check_nonempty

# PIL modes we accept; everything is 8 bits per sample.
_SUPPORTED_MODES = {"L", "LA", "RGB", "RGBA"}

# Rec.601 luma weights (per mille) for reducing RGB mask images to one channel.
_LUMA_WEIGHTS = (299, 587, 114)


@dataclass(frozen=True)
class PackingBox:
    """Inclusive column/row bounds of an instance: a..b horizontally, c..d vertically."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if not (0 <= self.a <= self.b and 0 <= self.c <= self.d):
            raise ValueError(f"invalid packing box ({self.a},{self.b},{self.c},{self.d})")

    @property
    def width(self) -> int:
        return self.b - self.a + 1

    @property
    def height(self) -> int:
        return self.d - self.c + 1


def _open_8bit(path) -> Image.Image:
    try:
        img = Image.open(path)
        img.load()
    except FileNotFoundError as exc:
        raise ImageIOError(f"cannot read {path}: file not found") from exc
    except UnidentifiedImageError as exc:
        raise ImageIOError(f"cannot read {path}: not a recognized image") from exc
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc}") from exc
    if img.mode not in _SUPPORTED_MODES:
        raise UnsupportedImageError(
            f"cannot read {path}: mode {img.mode!r} unsupported (need 8-bit L/LA/RGB/RGBA)"
        )
    return img


def load_image(path) -> np.ndarray:
    """Load an 8-bit PNG as a (H, W, 3) float64 array with samples v/255.

    Alpha channels are discarded; grayscale is replicated to 3 channels.
    """
    img = _open_8bit(path)
    data = np.asarray(img, dtype=np.uint8)
    if img.mode == "L":
        data = data[:, :, np.newaxis]
    if data.shape[2] in (2, 4):  # LA or RGBA: drop alpha
        data = data[:, :, :-1]
    if data.shape[2] == 1:
        data = np.repeat(data, 3, axis=2)
    return data.astype(np.float64) / 255.0


def save_image(image, path) -> None:
    """Clamp to [0, 1], quantize with round-half-up, and write an 8-bit RGB PNG."""
    image = as_image(image)
    if image.shape[2] != 3:
        raise ValueError(f"save_image needs 3 channels, got {image.shape[2]}")
    clamped = np.clip(image, 0.0, 1.0)
    quantized = np.floor(clamped * 255.0 + 0.5).astype(np.uint8)
    try:
        Image.fromarray(quantized, mode="RGB").save(path, format="PNG")
    except (OSError, ValueError) as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc


def load_mask(path, threshold: int = 128) -> np.ndarray:
    """Load a PNG as a bool (H, W) mask: true iff the luma byte >= threshold.

    Luma is the first channel for grayscale input and round-half-up Rec.601
    luma for RGB input.
    """
    if not 0 <= int(threshold) <= 255:
        raise ValueError(f"threshold must be in 0..255, got {threshold}")
    img = _open_8bit(path)
    data = np.asarray(img, dtype=np.uint8)
    if data.ndim == 2:
        luma = data
    elif data.shape[2] in (1, 2):  # L with explicit axis, or LA
        luma = data[:, :, 0]
    else:  # RGB or RGBA
        rgb = data[:, :, :3].astype(np.int64)
        # Exact round-half-up of (299R + 587G + 114B) / 1000.
        weighted = rgb @ np.asarray(_LUMA_WEIGHTS, dtype=np.int64)
        luma = (weighted + 500) // 1000
    return luma >= int(threshold)


def bounding_box(mask) -> PackingBox:
    """Smallest rectangle covering every true pixel of the mask."""
    mask = as_mask(mask)
    check_nonempty(mask)
    rows, cols = np.nonzero(mask)
    return PackingBox(a=int(cols.min()), b=int(cols.max()), c=int(rows.min()), d=int(rows.max()))


def crop(image, box: PackingBox) -> np.ndarray:
    """Axis-aligned crop; preserves sample values exactly."""
    image = as_image(image)
    height, width = image.shape[:2]
    if box.b >= width or box.d >= height:
        raise DimensionMismatchError(
            f"box ({box.a},{box.b},{box.c},{box.d}) exceeds image {height}x{width}"
        )
    return image[box.c : box.d + 1, box.a : box.b + 1, :].copy()
