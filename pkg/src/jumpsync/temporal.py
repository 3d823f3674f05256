"""Event detection by background subtraction over a linear ROI.

The detector computes, per frame, the mean absolute luma difference against
an event-free reference image over a thin line region (the top edge of the
jump stand), and picks the first frame whose difference exceeds the
threshold. That first crossing is the base frame anchoring each clip's
timeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from jumpsync import kernels
from jumpsync.errors import EventNotFoundError
from jumpsync.frame_io import Clip, Frame
from jumpsync.geometry import Point2

DEFAULT_THRESHOLD = 12.0
DEFAULT_ROI_THICKNESS = 3


@dataclass(frozen=True)
class LineRoi:
    """Line segment region of interest with an odd pixel thickness."""

    p0: Point2
    p1: Point2
    thickness: int = DEFAULT_ROI_THICKNESS

    def __post_init__(self) -> None:
        if self.p0.x == self.p1.x and self.p0.y == self.p1.y:
            raise ValueError("ROI endpoints must differ")
        if not isinstance(self.thickness, (int, np.integer)) or self.thickness < 1:
            raise ValueError(f"thickness must be an integer >= 1, got {self.thickness}")
        if self.thickness % 2 == 0:
            raise ValueError(f"thickness must be odd, got {self.thickness}")


@dataclass(frozen=True, eq=False)
class DetectionConfig:
    """Threshold, reference image and ROI for base-frame detection."""

    threshold: float
    reference: Frame
    roi: LineRoi

    def __post_init__(self) -> None:
        if not (0.0 < self.threshold <= 255.0):
            raise ValueError(f"threshold must be in (0, 255], got {self.threshold}")


@dataclass(frozen=True, eq=False)
class BaseFrameResult:
    """First frame exceeding the threshold plus the full per-frame signal."""

    base_index: int
    signal: np.ndarray


@dataclass(frozen=True)
class SyncPlan:
    """Detected base frames, their offset, and the comparison window."""

    base_a: int
    base_b: int
    offset: int
    pre: int
    post: int

    def __post_init__(self) -> None:
        if self.pre < 0 or self.post < 0:
            raise ValueError(f"window must be non-negative, got pre={self.pre} post={self.post}")
        if self.offset != self.base_a - self.base_b:
            raise ValueError("offset must equal base_a - base_b")


@dataclass(frozen=True, eq=False)
class ExtractedWindow:
    """A window clip plus how many requested frames were clamped away."""

    clip: Clip
    clamped_pre: int
    clamped_post: int


def rasterize_roi(roi: LineRoi, width: int, height: int) -> np.ndarray:
    """Integer pixels whose center lies within thickness/2 of the segment.

    Pixel centers sit on the integer grid. Returns an (n, 2) int64 array of
    (x, y) pairs in row-major order, clipped to the raster.
    """
    for p in (roi.p0, roi.p1):
        if not (0 <= p.x <= width - 1 and 0 <= p.y <= height - 1):
            raise ValueError(
                f"ROI endpoint ({p.x}, {p.y}) outside raster {width}x{height}"
            )
    radius = roi.thickness / 2.0
    x_lo = max(0, int(np.floor(min(roi.p0.x, roi.p1.x) - radius)) - 1)
    x_hi = min(width - 1, int(np.ceil(max(roi.p0.x, roi.p1.x) + radius)) + 1)
    y_lo = max(0, int(np.floor(min(roi.p0.y, roi.p1.y) - radius)) - 1)
    y_hi = min(height - 1, int(np.ceil(max(roi.p0.y, roi.p1.y) + radius)) + 1)

    xs = np.arange(x_lo, x_hi + 1, dtype=np.float64)
    ys = np.arange(y_lo, y_hi + 1, dtype=np.float64)
    gx, gy = np.meshgrid(xs, ys)

    dx = roi.p1.x - roi.p0.x
    dy = roi.p1.y - roi.p0.y
    len2 = dx * dx + dy * dy
    t = ((gx - roi.p0.x) * dx + (gy - roi.p0.y) * dy) / len2
    t = np.clip(t, 0.0, 1.0)
    cx = roi.p0.x + t * dx
    cy = roi.p0.y + t * dy
    dist2 = (gx - cx) ** 2 + (gy - cy) ** 2
    mask = dist2 <= radius * radius

    px = gx[mask].astype(np.int64)
    py = gy[mask].astype(np.int64)
    if px.size == 0:
        raise ValueError("ROI covers no pixels")
    order = np.lexsort((px, py))
    return np.column_stack((px[order], py[order]))


def roi_difference(frame: Frame, config: DetectionConfig, roi_pixels: np.ndarray) -> float:
    """Mean absolute luma difference between frame and reference over the ROI."""
    ref = config.reference
    if frame.width != ref.width or frame.height != ref.height:
        raise ValueError(
            f"frame is {frame.width}x{frame.height} but reference is {ref.width}x{ref.height}"
        )
    if len(roi_pixels) == 0:
        raise ValueError("empty ROI pixel set")
    xs = roi_pixels[:, 0]
    ys = roi_pixels[:, 1]
    luma_f = kernels.luma_from_rgb(frame.pixels[ys, xs]).astype(np.int64)
    luma_r = kernels.luma_from_rgb(ref.pixels[ys, xs]).astype(np.int64)
    return float(np.sum(np.abs(luma_f - luma_r)) / len(roi_pixels))


def detect_base_frame(clip: Clip, config: DetectionConfig) -> BaseFrameResult:
    """First frame whose ROI luma difference exceeds the threshold."""
    if len(clip) == 0:
        raise ValueError("cannot detect an event in an empty clip")
    ref = config.reference
    if ref.width != clip.width or ref.height != clip.height:
        raise ValueError(
            f"reference is {ref.width}x{ref.height} but clip is {clip.width}x{clip.height}"
        )
    roi_pixels = rasterize_roi(config.roi, clip.width, clip.height)
    xs = roi_pixels[:, 0]
    ys = roi_pixels[:, 1]
    luma_ref = kernels.luma_from_rgb(ref.pixels[ys, xs]).astype(np.int64)
    n_px = len(roi_pixels)

    signal = np.empty(len(clip), dtype=np.float64)
    for i, frame in enumerate(clip.frames):
        luma_f = kernels.luma_from_rgb(frame.pixels[ys, xs]).astype(np.int64)
        signal[i] = np.sum(np.abs(luma_f - luma_ref)) / n_px

    above = np.flatnonzero(signal > config.threshold)
    if above.size == 0:
        raise EventNotFoundError(
            f"event not found: no frame exceeds threshold {config.threshold} "
            f"(max difference {signal.max():.3f})"
        )
    return BaseFrameResult(int(above[0]), signal)


def make_sync_plan(base_a: int, base_b: int, pre: int, post: int) -> SyncPlan:
    """Plan pairing frame (base_a + k) of A with (base_b + k) of B, k in [-pre, post]."""
    return SyncPlan(base_a=base_a, base_b=base_b, offset=base_a - base_b, pre=pre, post=post)


def extract_window(clip: Clip, base: int, pre: int, post: int) -> ExtractedWindow:
    """Frames [base-pre, base+post] clamped to the clip, with the clamp recorded."""
    if pre < 0 or post < 0:
        raise ValueError(f"window must be non-negative, got pre={pre} post={post}")
    if len(clip) == 0:
        raise ValueError("cannot extract a window from an empty clip")
    lo_req = base - pre
    hi_req = base + post
    lo = max(0, lo_req)
    hi = min(len(clip) - 1, hi_req)
    if lo > hi:
        raise ValueError(
            f"window [{lo_req}, {hi_req}] does not intersect clip of length {len(clip)}"
        )
    window = Clip(clip.frames[lo : hi + 1], clip.fps)
    return ExtractedWindow(window, clamped_pre=lo - lo_req, clamped_post=hi_req - hi)


def median_reference(clip: Clip, frame_count: int = 30) -> Frame:
    """Per-pixel median of the clip's leading frames, as a reference fallback."""
    if len(clip) == 0:
        raise ValueError("cannot build a reference from an empty clip")
    n = min(frame_count, len(clip))
    stack = np.stack([f.pixels for f in clip.frames[:n]]).astype(np.float64)
    med = np.median(stack, axis=0)
    med = np.clip(np.floor(med + 0.5), 0.0, 255.0)
    return Frame(med.astype(np.uint8))


def write_signal_csv(path, signal: np.ndarray) -> None:
    """Dump the per-frame difference signal as (frame_index, difference) CSV."""
    lines = ["frame_index,difference\n"]
    lines.extend(f"{i},{float(v)!r}\n" for i, v in enumerate(signal))
    with open(path, "w", encoding="ascii") as fh:
        fh.writelines(lines)
