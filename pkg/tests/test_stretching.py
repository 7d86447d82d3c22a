"""Forward/backward stretching tests.

Oracles: slot positions recomputed with exact rational arithmetic, and a
scalar per-row interpolation that evaluates the first-order formula
independently of the vectorized implementation.
"""

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stretchstyle import (
    DegenerateIntervalError,
    DimensionMismatchError,
    EmptyMaskError,
    EmptyRow,
    OccupiedRow,
    RecordError,
    StretchRecord,
    TooManyPixelsError,
    backward_stretch,
    bounding_box,
    crop,
    forward_stretch,
    instance_mask,
    lerp,
    read_record,
    slot_positions,
    write_record,
)

from conftest import mask_cases, random_image


def oracle_slots_simple(a, b, n):
    """Exact rational evaluation of floor(a + k(b-a)/(n-1))."""
    if n == 1:
        return [a]
    from math import floor
    return [floor(Fraction(a) + Fraction(k * (b - a), n - 1)) for k in range(n)]


def oracle_stretch_row(width, a, cols, values):
    """Independent scalar evaluation of one stretched row.

    cols: absolute masked columns; values: (n, C) pixel values.
    Returns a (width, C) array.
    """
    n = len(cols)
    channels = values.shape[1]
    out = np.empty((width, channels))
    if n == 1:
        out[:] = values[0]
        return out
    slots = oracle_slots_simple(a, a + width - 1, n)
    for ch in range(channels):
        for x_rel in range(width):
            x = a + x_rel
            # locate the slot segment containing x
            for k in range(n - 1):
                if slots[k] <= x <= slots[k + 1]:
                    g0, g1 = values[k, ch], values[k + 1, ch]
                    x0, x1 = slots[k], slots[k + 1]
                    if x == x0:
                        out[x_rel, ch] = g0
                    elif x == x1:
                        out[x_rel, ch] = g1
                    else:
                        out[x_rel, ch] = g0 + (g1 - g0) / (x1 - x0) * (x - x0)
                    break
    return out


class TestLerp:
    def test_direct_evaluation(self):
        assert lerp(0, 0.0, 5, 10.0, 2) == 4.0

    def test_endpoints(self):
        assert lerp(1.0, 3.5, 4.0, -2.0, 1.0) == 3.5
        assert lerp(1.0, 3.5, 4.0, -2.0, 4.0) == -2.0

    def test_midpoint(self):
        assert lerp(0.0, 2.0, 2.0, 6.0, 1.0) == 4.0

    def test_degenerate_interval(self):
        with pytest.raises(DegenerateIntervalError):
            lerp(3.0, 1.0, 3.0, 2.0, 3.0)

    @given(
        x0=st.floats(-100, 100),
        span=st.floats(0.01, 100),
        g0=st.floats(-50, 50),
        g1=st.floats(-50, 50),
        t=st.floats(0, 1),
    )
    def test_stays_between_anchor_values(self, x0, span, g0, g1, t):
        x1 = x0 + span
        value = lerp(x0, g0, x1, g1, x0 + t * span)
        lo, hi = min(g0, g1), max(g0, g1)
        assert lo - 1e-9 * (1 + abs(lo)) <= value <= hi + 1e-9 * (1 + abs(hi))


class TestSlotPositions:
    def test_hand_example(self):
        assert slot_positions(3, 9, 3) == [3, 6, 9]
        assert slot_positions(3, 9, 3) == oracle_slots_simple(3, 9, 3)

    def test_dense_row_is_consecutive(self):
        assert slot_positions(4, 9, 6) == [4, 5, 6, 7, 8, 9]

    def test_two_pixels_at_endpoints(self):
        assert slot_positions(2, 11, 2) == [2, 11]

    def test_single_pixel(self):
        assert slot_positions(5, 9, 1) == [5]

    def test_too_many_pixels(self):
        with pytest.raises(TooManyPixelsError):
            slot_positions(3, 5, 4)

    def test_invalid_span(self):
        with pytest.raises(ValueError):
            slot_positions(5, 3, 1)

    @given(st.integers(0, 64), st.integers(0, 64), st.data())
    @settings(max_examples=300)
    def test_matches_rational_oracle(self, a, b, data):
        if a > b:
            a, b = b, a
        n = data.draw(st.integers(1, b - a + 1))
        slots = slot_positions(a, b, n)
        assert slots == oracle_slots_simple(a, b, n)
        assert all(s2 > s1 for s1, s2 in zip(slots, slots[1:]))
        if n >= 2:
            assert slots[0] == a and slots[-1] == b


class TestForwardStretch:
    def test_full_rectangle_equals_crop(self, rng):
        img = random_image(rng, 9, 7)
        mask = np.zeros((9, 7), dtype=bool)
        mask[2:6, 1:5] = True
        stretched, record = forward_stretch(img, mask)
        assert np.array_equal(stretched, crop(img, record.box))

    def test_single_row_interpolation_values(self):
        img = np.zeros((1, 12, 3))
        img[0, 3] = 0.0
        img[0, 5] = 0.2
        img[0, 9] = 0.6
        mask = np.zeros((1, 12), dtype=bool)
        mask[0, [3, 5, 9]] = True
        stretched, record = forward_stretch(img, mask)
        assert stretched.shape == (1, 7, 3)
        row = record.rows[0]
        assert row.original_cols == (3, 5, 9)
        assert row.slot_cols == (3, 6, 9)
        expected = oracle_stretch_row(7, 3, [3, 5, 9], img[0, [3, 5, 9], :])
        assert np.array_equal(stretched[0], expected)
        # spot values quoted to 4 digits
        assert stretched[0, 1, 0] == pytest.approx(0.0667, abs=5e-5)
        assert stretched[0, 2, 0] == pytest.approx(0.1333, abs=5e-5)
        assert stretched[0, 4, 0] == pytest.approx(0.3333, abs=5e-5)
        assert stretched[0, 5, 0] == pytest.approx(0.4667, abs=5e-5)

    def test_rows_match_scalar_oracle(self, rng):
        for h, w, mask in mask_cases(rng, 15, max_side=24):
            img = random_image(rng, h, w)
            stretched, record = forward_stretch(img, mask)
            box = record.box
            for r, row in enumerate(record.rows):
                if isinstance(row, EmptyRow):
                    continue
                cols = list(row.original_cols)
                expected = oracle_stretch_row(box.width, box.a, cols, img[box.c + r, cols, :])
                assert np.array_equal(stretched[r], expected)

    def test_single_true_pixel(self, rng):
        img = random_image(rng, 6, 6)
        mask = np.zeros((6, 6), dtype=bool)
        mask[4, 2] = True
        stretched, record = forward_stretch(img, mask)
        assert stretched.shape == (1, 1, 3)
        assert np.array_equal(stretched[0, 0], img[4, 2])

    def test_single_pixel_row_is_constant(self, rng):
        img = random_image(rng, 3, 10)
        mask = np.zeros((3, 10), dtype=bool)
        mask[0, 2:9] = True
        mask[1, 5] = True
        mask[2, 2:9] = True
        stretched, record = forward_stretch(img, mask)
        assert np.all(stretched[1] == img[1, 5])
        assert record.rows[1].slot_cols == (2,)

    def test_empty_row_copies_nearest_occupied(self, rng):
        img = random_image(rng, 7, 7)
        mask = np.zeros((7, 7), dtype=bool)
        mask[1, 1:6] = True
        mask[5, 1:6] = True  # rows 2..4 of the box are empty
        stretched, record = forward_stretch(img, mask)
        kinds = [type(r).__name__ for r in record.rows]
        assert kinds == ["OccupiedRow", "EmptyRow", "EmptyRow", "EmptyRow", "OccupiedRow"]
        assert record.rows[1].fill_source_row == 0
        assert record.rows[3].fill_source_row == 4
        # tie at box row 2 (distance 2 both ways) resolves upward
        assert record.rows[2].fill_source_row == 0
        assert np.array_equal(stretched[2], stretched[0])
        assert np.array_equal(stretched[3], stretched[4])

    def test_no_placeholder_survives(self, rng):
        for h, w, mask in mask_cases(rng, 30):
            stretched, _ = forward_stretch(random_image(rng, h, w), mask)
            assert np.isfinite(stretched).all()

    def test_monotone_row_stays_monotone(self, rng):
        img = np.zeros((1, 20, 3))
        cols = np.sort(rng.choice(20, size=6, replace=False))
        img[0, cols, :] = np.sort(rng.random_sample((6, 3)), axis=0)
        mask = np.zeros((1, 20), dtype=bool)
        mask[0, cols] = True
        stretched, _ = forward_stretch(img, mask)
        diffs = np.diff(stretched[0], axis=0)
        assert (diffs >= -1e-12).all()

    def test_empty_mask(self, rng):
        with pytest.raises(EmptyMaskError):
            forward_stretch(random_image(rng, 4, 4), np.zeros((4, 4), dtype=bool))

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatchError):
            forward_stretch(random_image(rng, 4, 4), np.ones((4, 5), dtype=bool))

    def test_record_enumerates_mask_exactly(self, rng):
        for h, w, mask in mask_cases(rng, 20):
            _, record = forward_stretch(random_image(rng, h, w), mask)
            assert np.array_equal(instance_mask(record), mask)


class TestBackwardStretch:
    def test_round_trip_exact(self, rng):
        for h, w, mask in mask_cases(rng, 25):
            img = random_image(rng, h, w)
            stretched, record = forward_stretch(img, mask)
            back = backward_stretch(stretched, record)
            assert back.shape == img.shape
            assert np.array_equal(back[mask], img[mask])
            assert not back[~mask].any()

    def test_hand_traced_placement_after_scaling(self):
        img = np.zeros((1, 12, 3))
        img[0, 3] = 0.0
        img[0, 5] = 0.2
        img[0, 9] = 0.6
        mask = np.zeros((1, 12), dtype=bool)
        mask[0, [3, 5, 9]] = True
        stretched, record = forward_stretch(img, mask)
        back = backward_stretch(stretched * 2.0, record)
        expected = np.zeros((1, 12, 3))
        expected[0, 3] = 0.0
        expected[0, 5] = 0.4
        expected[0, 9] = 1.2
        assert np.array_equal(back, expected)

    def test_all_true_mask(self, rng):
        img = random_image(rng, 5, 8)
        mask = np.ones((5, 8), dtype=bool)
        stretched, record = forward_stretch(img, mask)
        assert np.array_equal(backward_stretch(stretched, record), img)

    def test_shape_mismatch(self, rng):
        img = random_image(rng, 5, 8)
        stretched, record = forward_stretch(img, np.ones((5, 8), dtype=bool))
        with pytest.raises(DimensionMismatchError):
            backward_stretch(stretched[:, :-1, :], record)


class TestRecordSerialization:
    @pytest.fixture
    def record(self, rng):
        _, _, mask = mask_cases(rng, 0)[2]  # the disconnected case
        img = random_image(rng, mask.shape[0], mask.shape[1])
        return forward_stretch(img, mask)[1]

    def test_round_trip(self, tmp_path, record):
        path = tmp_path / "record.json"
        write_record(record, path)
        assert read_record(path) == record

    def test_normative_key_names(self, tmp_path, record):
        path = tmp_path / "record.json"
        write_record(record, path)
        doc = json.loads(path.read_text())
        assert set(doc) == {"box", "image_height", "image_width", "rows"}
        assert set(doc["box"]) == {"a", "b", "c", "d"}
        kinds = {row["kind"] for row in doc["rows"]}
        assert kinds <= {"occupied", "empty"}
        occupied = next(r for r in doc["rows"] if r["kind"] == "occupied")
        assert set(occupied) == {"kind", "original_cols", "slot_cols"}
        empty = next(r for r in doc["rows"] if r["kind"] == "empty")
        assert set(empty) == {"kind", "fill_source_row"}

    def test_truncated_json(self, tmp_path, record):
        path = tmp_path / "record.json"
        write_record(record, path)
        path.write_text(path.read_text()[:40])
        with pytest.raises(RecordError):
            read_record(path)

    def test_missing_key(self, tmp_path, record):
        path = tmp_path / "record.json"
        doc = record.to_dict()
        del doc["image_width"]
        path.write_text(json.dumps(doc))
        with pytest.raises(RecordError):
            read_record(path)

    def test_unknown_row_kind(self, tmp_path, record):
        path = tmp_path / "record.json"
        doc = record.to_dict()
        doc["rows"][0]["kind"] = "mystery"
        path.write_text(json.dumps(doc))
        with pytest.raises(RecordError):
            read_record(path)

    def test_fill_source_must_be_occupied(self, tmp_path, record):
        doc = record.to_dict()
        empty_idx = next(i for i, r in enumerate(doc["rows"]) if r["kind"] == "empty")
        doc["rows"][empty_idx]["fill_source_row"] = empty_idx
        path = tmp_path / "record.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(RecordError):
            read_record(path)

    def test_slots_must_span_box(self, tmp_path, record):
        doc = record.to_dict()
        occ = next(r for r in doc["rows"] if r["kind"] == "occupied" and len(r["slot_cols"]) > 1)
        occ["slot_cols"] = [c + 0 for c in occ["slot_cols"]]
        occ["slot_cols"][0] = doc["box"]["a"] + 1  # no longer starts at a
        occ["original_cols"] = occ["original_cols"][: len(occ["slot_cols"])]
        path = tmp_path / "record.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(RecordError):
            read_record(path)

    def test_non_increasing_columns(self, tmp_path, record):
        doc = record.to_dict()
        occ = next(r for r in doc["rows"] if r["kind"] == "occupied" and len(r["original_cols"]) > 1)
        occ["original_cols"] = occ["original_cols"][::-1]
        path = tmp_path / "record.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(RecordError):
            read_record(path)

    def test_row_count_must_match_box(self, tmp_path, record):
        doc = record.to_dict()
        doc["rows"] = doc["rows"][:-1]
        path = tmp_path / "record.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(RecordError):
            read_record(path)
