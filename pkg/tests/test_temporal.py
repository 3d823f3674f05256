from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpsync.errors import EventNotFoundError
from jumpsync.frame_io import Clip, Frame
from jumpsync.geometry import Point2
from jumpsync.temporal import (
    DetectionConfig,
    LineRoi,
    detect_base_frame,
    extract_window,
    make_sync_plan,
    median_reference,
    rasterize_roi,
    roi_difference,
    write_signal_csv,
)

from conftest import pattern_frame, random_frame
from oracles import mean_abs_luma_diff_reference, roi_pixels_reference


def as_tuples(pixels: np.ndarray) -> list[tuple[int, int]]:
    return [(int(x), int(y)) for x, y in pixels]


def gray_frame(width, height, level) -> Frame:
    return Frame(np.full((height, width, 3), level, dtype=np.uint8))


def clip_with_signal(reference: Frame, roi_pixels, levels, fps=120.0) -> Clip:
    """Frames identical to the reference except ROI pixels shifted by each level."""
    frames = []
    for lv in levels:
        px = reference.pixels.copy()
        for x, y in as_tuples(roi_pixels):
            px[y, x] = np.clip(px[y, x].astype(np.int16) + lv, 0, 255).astype(np.uint8)
        frames.append(Frame(px))
    return Clip(tuple(frames), fps)


HLINE = LineRoi(Point2(1, 2), Point2(4, 2), 1)


class TestRasterizeRoi:
    def test_horizontal_thickness_1(self):
        got = rasterize_roi(HLINE, 8, 8)
        assert as_tuples(got) == [(1, 2), (2, 2), (3, 2), (4, 2)]

    def test_horizontal_thickness_3_matches_brute_force(self):
        got = rasterize_roi(LineRoi(Point2(1, 2), Point2(4, 2), 3), 8, 8)
        expected = roi_pixels_reference((1, 2), (4, 2), 3, 8, 8)
        assert as_tuples(got) == expected
        # thickness 3 widens the band to rows 1..3 (plus the rounded caps)
        assert {(x, 1) for x in range(1, 5)} <= set(as_tuples(got))
        assert {(x, 3) for x in range(1, 5)} <= set(as_tuples(got))

    def test_diagonal_thickness_1_matches_brute_force(self):
        got = rasterize_roi(LineRoi(Point2(0, 0), Point2(3, 3), 1), 8, 8)
        assert as_tuples(got) == roi_pixels_reference((0, 0), (3, 3), 1, 8, 8)

    def test_arbitrary_segment_matches_brute_force(self):
        roi = LineRoi(Point2(2.5, 1.25), Point2(10.0, 7.5), 3)
        got = rasterize_roi(roi, 12, 10)
        assert as_tuples(got) == roi_pixels_reference((2.5, 1.25), (10.0, 7.5), 3, 12, 10)

    def test_clipping_to_raster(self):
        got = rasterize_roi(LineRoi(Point2(0, 0), Point2(5, 0), 3), 6, 2)
        expected = roi_pixels_reference((0, 0), (5, 0), 3, 6, 2)
        assert as_tuples(got) == expected

    def test_endpoint_outside_raster_errors(self):
        with pytest.raises(ValueError, match="outside raster"):
            rasterize_roi(HLINE, 4, 4)

    def test_even_thickness_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            LineRoi(Point2(0, 0), Point2(1, 0), 2)

    def test_degenerate_segment_rejected(self):
        with pytest.raises(ValueError, match="differ"):
            LineRoi(Point2(1, 1), Point2(1, 1), 1)


class TestRoiDifference:
    def test_identical_frames_give_zero(self):
        ref = pattern_frame(8, 8)
        pixels = rasterize_roi(HLINE, 8, 8)
        config = DetectionConfig(12.0, ref, HLINE)
        assert roi_difference(ref, config, pixels) == 0.0

    def test_uniform_luma_shift_of_10_gives_10(self):
        ref = gray_frame(8, 8, 100)
        pixels = rasterize_roi(HLINE, 8, 8)
        frame = clip_with_signal(ref, pixels, [10]).frames[0]
        config = DetectionConfig(12.0, ref, HLINE)
        assert roi_difference(frame, config, pixels) == 10.0

    def test_matches_per_pixel_summation_oracle(self, rng):
        ref = random_frame(rng, 10, 9)
        frame = random_frame(rng, 10, 9)
        roi = LineRoi(Point2(1, 1), Point2(8, 7), 3)
        pixels = rasterize_roi(roi, 10, 9)
        config = DetectionConfig(12.0, ref, roi)
        got = roi_difference(frame, config, pixels)
        expected = mean_abs_luma_diff_reference(frame.pixels, ref.pixels, as_tuples(pixels))
        assert got == pytest.approx(expected, abs=1e-12)

    def test_invariant_to_changes_outside_roi(self, rng):
        ref = gray_frame(8, 8, 64)
        pixels = rasterize_roi(HLINE, 8, 8)
        config = DetectionConfig(12.0, ref, HLINE)
        frame_px = ref.pixels.copy()
        inside = set(as_tuples(pixels))
        for y in range(8):
            for x in range(8):
                if (x, y) not in inside:
                    frame_px[y, x] = rng.integers(0, 256, size=3, dtype=np.uint8)
        assert roi_difference(Frame(frame_px), config, pixels) == 0.0

    def test_empty_pixel_set_errors(self):
        ref = gray_frame(8, 8, 64)
        config = DetectionConfig(12.0, ref, HLINE)
        with pytest.raises(ValueError, match="empty"):
            roi_difference(ref, config, np.empty((0, 2), dtype=np.int64))

    def test_dimension_mismatch_errors(self):
        config = DetectionConfig(12.0, gray_frame(8, 8, 0), HLINE)
        with pytest.raises(ValueError, match="reference"):
            roi_difference(gray_frame(9, 8, 0), config, rasterize_roi(HLINE, 8, 8))


class TestDetect:
    def test_first_crossing_rule(self):
        ref = gray_frame(8, 8, 100)
        pixels = rasterize_roi(HLINE, 8, 8)
        clip = clip_with_signal(ref, pixels, [0, 0, 3, 0, 5])
        config = DetectionConfig(0.5, ref, HLINE)
        result = detect_base_frame(clip, config)
        assert result.base_index == 2
        assert np.allclose(result.signal, [0, 0, 3, 0, 5])

    def test_signal_matches_roi_difference_per_frame(self, rng):
        ref = random_frame(rng, 9, 7)
        roi = LineRoi(Point2(1, 3), Point2(7, 3), 3)
        frames = tuple(random_frame(rng, 9, 7) for _ in range(5))
        clip = Clip(frames, 120.0)
        config = DetectionConfig(200.0, ref, roi)
        pixels = rasterize_roi(roi, 9, 7)
        with pytest.raises(EventNotFoundError):
            detect_base_frame(clip, config)
        low = DetectionConfig(0.001, ref, roi)
        result = detect_base_frame(clip, low)
        for i, frame in enumerate(frames):
            assert result.signal[i] == roi_difference(frame, low, pixels)

    def test_all_frames_equal_reference_raises_event_not_found(self):
        ref = gray_frame(8, 8, 100)
        clip = Clip(tuple(Frame(ref.pixels.copy()) for _ in range(4)), 120.0)
        config = DetectionConfig(12.0, ref, HLINE)
        with pytest.raises(EventNotFoundError, match="event not found"):
            detect_base_frame(clip, config)

    def test_no_earlier_frame_exceeds_threshold(self):
        ref = gray_frame(8, 8, 100)
        pixels = rasterize_roi(HLINE, 8, 8)
        clip = clip_with_signal(ref, pixels, [1, 5, 2, 9, 30])
        config = DetectionConfig(4.0, ref, HLINE)
        result = detect_base_frame(clip, config)
        assert result.base_index == 1
        assert np.all(result.signal[: result.base_index] <= 4.0)

    @given(tau=st.floats(min_value=0.5, max_value=40.0))
    @settings(max_examples=25, deadline=None)
    def test_raising_threshold_never_decreases_base_index(self, tau):
        ref = gray_frame(8, 8, 100)
        pixels = rasterize_roi(HLINE, 8, 8)
        clip = clip_with_signal(ref, pixels, [2, 11, 4, 25, 50])
        lo = detect_base_frame(clip, DetectionConfig(0.4, ref, HLINE))
        try:
            hi = detect_base_frame(clip, DetectionConfig(tau, ref, HLINE))
        except EventNotFoundError:
            return
        assert hi.base_index >= lo.base_index


class TestSyncPlan:
    def test_equal_bases_give_zero_offset(self):
        assert make_sync_plan(100, 100, 5, 5).offset == 0

    def test_offset_is_base_a_minus_base_b(self):
        plan = make_sync_plan(120, 95, 2, 3)
        assert plan.offset == 25

    def test_negative_window_rejected(self):
        with pytest.raises(ValueError):
            make_sync_plan(1, 1, -1, 0)


class TestExtractWindow:
    def clip10(self):
        return Clip(tuple(pattern_frame(4, 4, salt=i) for i in range(10)), 120.0)

    def test_interior_window(self):
        ex = extract_window(self.clip10(), 5, 2, 2)
        assert len(ex.clip) == 5
        assert ex.clamped_pre == 0 and ex.clamped_post == 0
        assert np.array_equal(ex.clip.frames[0].pixels, pattern_frame(4, 4, salt=3).pixels)
        assert np.array_equal(ex.clip.frames[-1].pixels, pattern_frame(4, 4, salt=7).pixels)

    def test_leading_clamp_reported(self):
        ex = extract_window(self.clip10(), 1, 5, 0)
        assert len(ex.clip) == 2
        assert ex.clamped_pre == 4
        assert ex.clamped_post == 0

    def test_single_frame_window(self):
        ex = extract_window(self.clip10(), 4, 0, 0)
        assert len(ex.clip) == 1
        assert np.array_equal(ex.clip.frames[0].pixels, pattern_frame(4, 4, salt=4).pixels)

    def test_fps_preserved(self):
        clip = Clip(tuple(pattern_frame(4, 4, salt=i) for i in range(3)), 240.0)
        assert extract_window(clip, 1, 1, 1).clip.fps == 240.0

    def test_disjoint_window_errors(self):
        with pytest.raises(ValueError, match="does not intersect"):
            extract_window(self.clip10(), -20, 2, 2)


class TestMedianReference:
    def test_majority_pixel_wins(self):
        frames = [gray_frame(4, 4, v) for v in (10, 10, 10, 200, 200)]
        ref = median_reference(Clip(tuple(frames), 120.0))
        assert np.all(ref.pixels == 10)

    def test_even_count_rounds_half_away(self):
        frames = [gray_frame(2, 2, v) for v in (10, 11)]
        ref = median_reference(Clip(tuple(frames), 120.0))
        assert np.all(ref.pixels == 11)  # median 10.5 rounds up


def test_signal_csv_format(tmp_path):
    path = tmp_path / "signal.csv"
    write_signal_csv(path, np.array([0.0, 1.5, 12.25]))
    lines = path.read_text().splitlines()
    assert lines[0] == "frame_index,difference"
    assert lines[1] == "0,0.0"
    assert lines[3] == "2,12.25"
