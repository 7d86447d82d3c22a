"""Forward and backward stretching of a masked instance.

Forward stretching maps each row's masked pixels onto floor-spaced slot
columns spanning the packing box and fills the gaps by linear
interpolation, producing a dense rectangular tensor. The stretch record
keeps, per row, which columns the pixels came from and which slots they
landed in; backward stretching uses it to send every placed sample home
(bit-exactly) and discard everything that was interpolated.

Row cases the slot formula does not cover:
  * a row with a single masked pixel is placed at slot ``a`` and the rest
    of the stretched row is held constant at its value;
  * a row of the box with no masked pixel at all (disconnected masks)
    copies the stretched values of the nearest occupied row, ties going
    to the row above. Both kinds of fill are ignored on the way back.
"""

import json
import numpy as np
from dataclasses import dataclass

from .errors import (
    DegenerateIntervalError,
    DimensionMismatchError,
    RecordError,
    StretchStyleError,
    TooManyPixelsError,
)
from .raster import PackingBox, bounding_box
from .validation import as_image, as_mask, check_image_mask_pair, check_nonempty

__all__ = [
    "OccupiedRow",
    "EmptyRow",
    "StretchRecord",
    "lerp",
    "slot_positions",
    "forward_stretch",
    "backward_stretch",
    "instance_mask",
    "write_record",
    "read_record",
]


@dataclass(frozen=True)
class OccupiedRow:
    """A box row holding n >= 1 masked pixels; columns are absolute indices."""

    original_cols: tuple
    slot_cols: tuple


@dataclass(frozen=True)
class EmptyRow:
    """A box row with no masked pixel; filled from an occupied row."""

    fill_source_row: int


@dataclass(frozen=True)
class StretchRecord:
    """Everything needed to invert a forward stretch exactly."""

    box: PackingBox
    image_height: int
    image_width: int
    rows: tuple

    def to_dict(self) -> dict:
        rows = []
        for row in self.rows:
            if isinstance(row, OccupiedRow):
                rows.append(
                    {
                        "kind": "occupied",
                        "original_cols": list(row.original_cols),
                        "slot_cols": list(row.slot_cols),
                    }
                )
            else:
                rows.append({"kind": "empty", "fill_source_row": row.fill_source_row})
        return {
            "box": {"a": self.box.a, "b": self.box.b, "c": self.box.c, "d": self.box.d},
            "image_height": self.image_height,
            "image_width": self.image_width,
            "rows": rows,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StretchRecord":
        record = _record_from_dict(doc)
        _validate_record(record)
        return record


def lerp(x0: float, g0: float, x1: float, g1: float, x: float) -> float:
    """First-order interpolation of g between the anchors (x0, g0) and (x1, g1)."""
    if x0 == x1:
        raise DegenerateIntervalError(f"interval [{x0}, {x1}] has zero length")
    return g0 + (g1 - g0) / (x1 - x0) * (x - x0)


def slot_positions(a: int, b: int, n: int) -> list:
    """Floor-spaced columns for n pixels across the inclusive span a..b.

    For n >= 2 the k-th slot is floor(a + k*(b-a)/(n-1)); a lone pixel
    sits at a. Spacing >= 1 guarantees strictly increasing output.
    """
    a, b, n = int(a), int(b), int(n)
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    if n > b - a + 1:
        raise TooManyPixelsError(f"{n} pixels do not fit in {b - a + 1} columns")
    if n == 1:
        return [a]
    span = b - a
    return [a + (k * span) // (n - 1) for k in range(n)]


def forward_stretch(image, mask):
    """Stretch the masked instance into a dense packing-box tensor.

    Returns (stretched, record): a (P_h, P_w, C) float64 array with no
    placeholder left, and the record that makes `backward_stretch` exact.
    """
    image = as_image(image)
    mask = as_mask(mask)
    check_image_mask_pair(image, mask)
    check_nonempty(mask)

    box = bounding_box(mask)
    channels = image.shape[2]
    stretched = np.full((box.height, box.width, channels), np.nan)

    rows = []
    occupied_indices = []
    for r in range(box.height):
        cols = np.flatnonzero(mask[box.c + r, :])
        if cols.size == 0:
            rows.append(None)  # resolved to EmptyRow below
            continue
        slots = slot_positions(box.a, box.b, cols.size)
        rows.append(OccupiedRow(original_cols=tuple(int(x) for x in cols), slot_cols=tuple(slots)))
        occupied_indices.append(r)
        _fill_row(stretched[r], image[box.c + r], cols, slots, box.a)

    for r, row in enumerate(rows):
        if row is None:
            source = min(occupied_indices, key=lambda o: (abs(o - r), o - r))
            rows[r] = EmptyRow(fill_source_row=source)
            stretched[r] = stretched[source]

    if np.isnan(stretched).any():
        raise StretchStyleError("internal: placeholder samples survived forward stretching")

    record = StretchRecord(
        box=box,
        image_height=image.shape[0],
        image_width=image.shape[1],
        rows=tuple(rows),
    )
    return stretched, record


def _fill_row(out_row, image_row, cols, slots, a):
    """Place one row's pixels at their slots and interpolate the gaps.

    out_row is (P_w, C) within the box; cols/slots are absolute columns.
    """
    values = image_row[cols, :]  # (n, C)
    if len(slots) == 1:
        out_row[:] = values[0]
        return
    out_row[np.asarray(slots) - a, :] = values
    for k in range(len(slots) - 1):
        x0, x1 = slots[k], slots[k + 1]
        if x1 - x0 < 2:
            continue
        g0, g1 = values[k], values[k + 1]
        between = np.arange(x0 + 1, x1, dtype=np.float64)
        # Vectorized form of lerp() with slot columns as abscissae.
        out_row[x0 + 1 - a : x1 - a, :] = g0 + (g1 - g0) / (x1 - x0) * (between - x0)[:, None]


def backward_stretch(stretched, record: StretchRecord) -> np.ndarray:
    """Send placed samples back to their mask pixels; everything else is zero."""
    stretched = as_image(stretched, name="stretched")
    box = record.box
    if stretched.shape[:2] != (box.height, box.width):
        raise DimensionMismatchError(
            f"stretched tensor is {stretched.shape[0]}x{stretched.shape[1]} "
            f"but the record's box is {box.height}x{box.width}"
        )
    out = np.zeros((record.image_height, record.image_width, stretched.shape[2]))
    for r, row in enumerate(record.rows):
        if isinstance(row, EmptyRow):
            continue
        src = np.asarray(row.slot_cols) - box.a
        out[box.c + r, list(row.original_cols), :] = stretched[r, src, :]
    return out


def instance_mask(record: StretchRecord) -> np.ndarray:
    """Rebuild the boolean mask whose true pixels the record enumerates."""
    mask = np.zeros((record.image_height, record.image_width), dtype=bool)
    for r, row in enumerate(record.rows):
        if isinstance(row, OccupiedRow):
            mask[record.box.c + r, list(row.original_cols)] = True
    return mask


def write_record(record: StretchRecord, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record.to_dict(), fh, indent=2)
        fh.write("\n")


def read_record(path) -> StretchRecord:
    """Parse and fully validate a stretch record document."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise RecordError(f"cannot read record {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RecordError(f"malformed record {path}: {exc}") from exc
    return StretchRecord.from_dict(doc)


def _record_from_dict(doc) -> StretchRecord:
    try:
        box = doc["box"]
        rows_doc = doc["rows"]
        height = doc["image_height"]
        width = doc["image_width"]
        parsed_box = PackingBox(
            a=int(box["a"]), b=int(box["b"]), c=int(box["c"]), d=int(box["d"])
        )
        rows = []
        for entry in rows_doc:
            kind = entry["kind"]
            if kind == "occupied":
                rows.append(
                    OccupiedRow(
                        original_cols=tuple(int(x) for x in entry["original_cols"]),
                        slot_cols=tuple(int(x) for x in entry["slot_cols"]),
                    )
                )
            elif kind == "empty":
                rows.append(EmptyRow(fill_source_row=int(entry["fill_source_row"])))
            else:
                raise RecordError(f"unknown row kind {kind!r}")
    except RecordError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise RecordError(f"malformed record document: {exc}") from exc
    return StretchRecord(
        box=parsed_box, image_height=int(height), image_width=int(width), rows=tuple(rows)
    )


def _validate_record(record: StretchRecord) -> None:
    box = record.box
    if record.image_height < 1 or record.image_width < 1:
        raise RecordError("image dimensions must be positive")
    if box.b >= record.image_width or box.d >= record.image_height:
        raise RecordError("packing box exceeds image dimensions")
    if len(record.rows) != box.height:
        raise RecordError(f"expected {box.height} rows, found {len(record.rows)}")
    occupied = {r for r, row in enumerate(record.rows) if isinstance(row, OccupiedRow)}
    if not occupied:
        raise RecordError("record has no occupied row")
    for r, row in enumerate(record.rows):
        if isinstance(row, EmptyRow):
            if row.fill_source_row not in occupied:
                raise RecordError(f"row {r} fills from row {row.fill_source_row}, not occupied")
            continue
        n = len(row.original_cols)
        if n < 1 or len(row.slot_cols) != n:
            raise RecordError(f"row {r} has mismatched column lists")
        for cols in (row.original_cols, row.slot_cols):
            if any(cols[i] >= cols[i + 1] for i in range(n - 1)):
                raise RecordError(f"row {r} columns are not strictly increasing")
        if not all(box.a <= x <= box.b for x in row.original_cols + row.slot_cols):
            raise RecordError(f"row {r} columns leave the packing box")
        if n == 1:
            if row.slot_cols != (box.a,):
                raise RecordError(f"row {r}: single pixel must sit at slot {box.a}")
        elif row.slot_cols[0] != box.a or row.slot_cols[-1] != box.b:
            raise RecordError(f"row {r} slots must span {box.a}..{box.b}")
