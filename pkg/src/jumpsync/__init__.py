"""jumpsync: spatiotemporal synchronization of two-view jump videos.

Detects a common take-off event in two recordings via background
subtraction, aligns their timelines, corrects the second viewpoint with a
homography, and renders side-by-side or superimposed comparison video.
"""

from jumpsync.compose import CompositeSpec, overlay, pair_frames, render, side_by_side
from jumpsync.evalmetrics import EvalSummary, TrialEval, difference_in_errors, summarize
from jumpsync.frame_io import (
    Clip,
    Frame,
    LumaPlane,
    read_frame,
    read_frame_sequence,
    to_luma,
    write_frame,
    write_frame_sequence,
)
from jumpsync.geometry import (
    Correspondences,
    Homography,
    Point2,
    estimate_homography,
    warp_clip,
    warp_frame,
)
from jumpsync.synthetic import Scenario, generate, make_scenario, top_edge_roi
from jumpsync.temporal import (
    BaseFrameResult,
    DetectionConfig,
    LineRoi,
    SyncPlan,
    detect_base_frame,
    extract_window,
    make_sync_plan,
    median_reference,
    rasterize_roi,
    roi_difference,
)

__version__ = "0.1.0"

__all__ = [
    "BaseFrameResult",
    "Clip",
    "CompositeSpec",
    "Correspondences",
    "DetectionConfig",
    "EvalSummary",
    "Frame",
    "Homography",
    "LineRoi",
    "LumaPlane",
    "Point2",
    "Scenario",
    "SyncPlan",
    "TrialEval",
    "detect_base_frame",
    "difference_in_errors",
    "estimate_homography",
    "extract_window",
    "generate",
    "make_scenario",
    "make_sync_plan",
    "median_reference",
    "overlay",
    "pair_frames",
    "rasterize_roi",
    "read_frame",
    "read_frame_sequence",
    "render",
    "roi_difference",
    "side_by_side",
    "summarize",
    "to_luma",
    "top_edge_roi",
    "warp_clip",
    "warp_frame",
    "write_frame",
    "write_frame_sequence",
]
