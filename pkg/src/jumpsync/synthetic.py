"""Seeded two-view synthetic jump scenes with exact ground truth.

Each scenario renders a fixed trapezoidal jump stand on a flat background
and a bright disc (the "rider") that drops through the stand's top edge.
View A shows the scene directly; view B shows the same geometry pushed
through a known homography, with its own event timing. Because the disc
center sits exactly on the top edge at the event frame and keeps a clear
per-frame gap before it, the first detection crossing is the event frame by
construction, which makes these clips usable as an oracle for the detector
and for the end-to-end pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from jumpsync.frame_io import Clip, Frame
from jumpsync.geometry import Homography, Point2
from jumpsync.temporal import DEFAULT_ROI_THICKNESS, LineRoi

BACKGROUND_RGB = (202, 202, 208)
STAND_RGB = (88, 88, 94)
DISC_RGB = (250, 250, 250)

# Corner order everywhere: top-left, top-right, bottom-right, bottom-left.
_STAND_CORNERS_A = (
    Point2(110.0, 60.0),
    Point2(210.0, 60.0),
    Point2(250.0, 150.0),
    Point2(70.0, 150.0),
)


@dataclass(frozen=True, eq=False)
class Scenario:
    """Complete description of a two-view synthetic trial, all truth included."""

    seed: int
    width: int
    height: int
    fps: float
    n_frames: int
    event_frame_a: int
    event_frame_b: int
    true_h: Homography
    stand_corners_a: tuple[Point2, ...]
    stand_corners_b: tuple[Point2, ...]
    noise_sigma: float
    disc_radius: float
    disc_speed: float

    def __post_init__(self) -> None:
        if self.width < 8 or self.height < 8:
            raise ValueError("raster too small for a scene")
        if self.n_frames < 1:
            raise ValueError("need at least one frame")
        for name, ev in (("event_frame_a", self.event_frame_a), ("event_frame_b", self.event_frame_b)):
            if not (0 <= ev < self.n_frames):
                raise ValueError(f"{name}={ev} outside [0, {self.n_frames})")
        if len(self.stand_corners_a) != 4 or len(self.stand_corners_b) != 4:
            raise ValueError("stand needs exactly 4 corners per view")
        for pa, pb in zip(self.stand_corners_a, self.stand_corners_b):
            q = self.true_h.apply(pa)
            if abs(q.x - pb.x) > 1e-9 or abs(q.y - pb.y) > 1e-9:
                raise ValueError("stand_corners_b do not match true_h applied to stand_corners_a")
        if self.disc_radius <= 0:
            raise ValueError("disc_radius must be positive")
        if self.disc_speed <= 0:
            raise ValueError("disc_speed must be positive: a parked disc never crosses the line")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")


def make_scenario(
    seed: int,
    *,
    noise_sigma: float = 0.0,
    width: int = 320,
    height: int = 180,
    fps: float = 120.0,
    n_frames: int = 120,
    event_frame_a: int | None = None,
    event_frame_b: int | None = None,
    disc_radius: float = 10.0,
    disc_speed: float = 16.0,
) -> Scenario:
    """Derive a scenario from a seed: event frames and a mild view-B homography.

    Explicit event frames override the seeded draw without disturbing the
    rest of the stream, so delaying an event keeps the geometry fixed.
    """
    rng = np.random.default_rng(seed)
    # Leave pre-roll for the noise-only lead-in and post-roll for the window.
    ev_lo = max(4, n_frames // 4)
    ev_hi = max(ev_lo, n_frames - max(4, (3 * n_frames) // 8))
    ev_a = int(rng.integers(ev_lo, ev_hi + 1))
    ev_b = int(rng.integers(ev_lo, ev_hi + 1))
    if event_frame_a is not None:
        ev_a = event_frame_a
    if event_frame_b is not None:
        ev_b = event_frame_b

    theta = rng.uniform(-0.06, 0.06)
    scale = rng.uniform(0.93, 1.07)
    tx = rng.uniform(-10.0, 10.0)
    ty = rng.uniform(-8.0, 8.0)
    px = rng.uniform(-2e-4, 2e-4)
    py = rng.uniform(-2e-4, 2e-4)

    cx = (width - 1) / 2.0
    cy = (height - 1) / 2.0
    mid = np.array(
        [
            [scale * math.cos(theta), -scale * math.sin(theta), tx],
            [scale * math.sin(theta), scale * math.cos(theta), ty],
            [px, py, 1.0],
        ]
    )
    to_center = np.array([[1.0, 0.0, -cx], [0.0, 1.0, -cy], [0.0, 0.0, 1.0]])
    from_center = np.array([[1.0, 0.0, cx], [0.0, 1.0, cy], [0.0, 0.0, 1.0]])
    true_h = Homography(from_center @ mid @ to_center)

    corners_a = _STAND_CORNERS_A
    corners_b = tuple(true_h.apply(p) for p in corners_a)

    scenario = Scenario(
        seed=seed,
        width=width,
        height=height,
        fps=fps,
        n_frames=n_frames,
        event_frame_a=ev_a,
        event_frame_b=ev_b,
        true_h=true_h,
        stand_corners_a=corners_a,
        stand_corners_b=corners_b,
        noise_sigma=noise_sigma,
        disc_radius=disc_radius,
        disc_speed=disc_speed,
    )
    _validate_trajectory(scenario)
    return scenario


def top_edge_roi(corners: tuple[Point2, ...], thickness: int = DEFAULT_ROI_THICKNESS) -> LineRoi:
    """Detection ROI along the stand's top edge (first two corners)."""
    return LineRoi(corners[0], corners[1], thickness)


def _segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    dx = b.x - a.x
    dy = b.y - a.y
    len2 = dx * dx + dy * dy
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def _scene_disc_center(scenario: Scenario, phase: float) -> Point2:
    """Disc center in scene (view A) coordinates at a given phase.

    Phase 0 is the crossing instant: the disc center sits on the midpoint of
    the stand's top edge and moves straight down at disc_speed px/frame.
    """
    tl, tr = scenario.stand_corners_a[0], scenario.stand_corners_a[1]
    mx = (tl.x + tr.x) / 2.0
    my = (tl.y + tr.y) / 2.0
    return Point2(mx, my + phase * scenario.disc_speed)


def _disc_center_in_view(scenario: Scenario, view: str, frame_index: int) -> Point2:
    event = scenario.event_frame_a if view == "a" else scenario.event_frame_b
    center = _scene_disc_center(scenario, float(frame_index - event))
    if view == "b":
        center = scenario.true_h.apply(center)
    return center


def _validate_trajectory(scenario: Scenario) -> None:
    """Reject scenarios whose truth the rendered clips would not honor."""
    clearance = scenario.disc_radius + DEFAULT_ROI_THICKNESS / 2.0 + 0.5
    margin = 2.0
    for p in scenario.stand_corners_b:
        if not (margin <= p.x <= scenario.width - 1 - margin and margin <= p.y <= scenario.height - 1 - margin):
            raise ValueError(
                f"invalid scenario: projected stand corner ({p.x:.1f}, {p.y:.1f}) "
                "falls outside the view-B raster"
            )
    for view in ("a", "b"):
        event = scenario.event_frame_a if view == "a" else scenario.event_frame_b
        corners = scenario.stand_corners_a if view == "a" else scenario.stand_corners_b
        tl, tr = corners[0], corners[1]
        at_event = _segment_distance(_disc_center_in_view(scenario, view, event), tl, tr)
        if at_event > 1.0:
            raise ValueError(
                f"invalid scenario: disc never crosses the detection line in view {view}"
            )
        for t in range(0, event):
            d = _segment_distance(_disc_center_in_view(scenario, view, t), tl, tr)
            if d <= clearance:
                raise ValueError(
                    f"invalid scenario: disc touches the detection line at frame {t} "
                    f"before the view-{view} event frame {event}"
                )


def _quad_mask(width: int, height: int, corners: tuple[Point2, ...]) -> np.ndarray:
    """Boolean inside-mask of a convex quad over the integer pixel grid."""
    gx, gy = np.meshgrid(np.arange(width, dtype=np.float64), np.arange(height, dtype=np.float64))
    pos = np.ones((height, width), dtype=bool)
    neg = np.ones((height, width), dtype=bool)
    for i in range(4):
        a = corners[i]
        b = corners[(i + 1) % 4]
        cross = (b.x - a.x) * (gy - a.y) - (b.y - a.y) * (gx - a.x)
        pos &= cross >= 0.0
        neg &= cross <= 0.0
    return pos | neg


def _render_background(scenario: Scenario, corners: tuple[Point2, ...]) -> np.ndarray:
    scene = np.empty((scenario.height, scenario.width, 3), dtype=np.uint8)
    scene[:, :] = np.asarray(BACKGROUND_RGB, dtype=np.uint8)
    scene[_quad_mask(scenario.width, scenario.height, corners)] = np.asarray(
        STAND_RGB, dtype=np.uint8
    )
    return scene


def _paint_disc(scene: np.ndarray, center: Point2, radius: float) -> None:
    height, width = scene.shape[0], scene.shape[1]
    x_lo = max(0, int(math.floor(center.x - radius)))
    x_hi = min(width - 1, int(math.ceil(center.x + radius)))
    y_lo = max(0, int(math.floor(center.y - radius)))
    y_hi = min(height - 1, int(math.ceil(center.y + radius)))
    if x_lo > x_hi or y_lo > y_hi:
        return
    gx, gy = np.meshgrid(
        np.arange(x_lo, x_hi + 1, dtype=np.float64),
        np.arange(y_lo, y_hi + 1, dtype=np.float64),
    )
    mask = (gx - center.x) ** 2 + (gy - center.y) ** 2 <= radius * radius
    region = scene[y_lo : y_hi + 1, x_lo : x_hi + 1]
    region[mask] = np.asarray(DISC_RGB, dtype=np.uint8)


def _with_noise(scene: np.ndarray, rng: np.random.Generator, sigma: float) -> np.ndarray:
    """Additive seeded Gaussian noise on luma-equivalent RGB (same draw per channel)."""
    if sigma == 0.0:
        return scene.copy()
    noise = rng.normal(0.0, sigma, size=scene.shape[:2])
    noisy = scene.astype(np.float64) + noise[:, :, None]
    return np.clip(np.floor(noisy + 0.5), 0.0, 255.0).astype(np.uint8)


def generate(scenario: Scenario) -> tuple[Clip, Clip, Frame, Frame]:
    """Render (clip_a, clip_b, reference_a, reference_b), deterministic per seed.

    Noise draw order is fixed: reference A, reference B, then clip A frames,
    then clip B frames.
    """
    _validate_trajectory(scenario)
    rng = np.random.default_rng(scenario.seed)

    base_a = _render_background(scenario, scenario.stand_corners_a)
    base_b = _render_background(scenario, scenario.stand_corners_b)
    reference_a = Frame(_with_noise(base_a, rng, scenario.noise_sigma))
    reference_b = Frame(_with_noise(base_b, rng, scenario.noise_sigma))

    clips = []
    for view, base in (("a", base_a), ("b", base_b)):
        frames = []
        for t in range(scenario.n_frames):
            scene = base.copy()
            _paint_disc(scene, _disc_center_in_view(scenario, view, t), scenario.disc_radius)
            frames.append(Frame(_with_noise(scene, rng, scenario.noise_sigma)))
        clips.append(Clip(tuple(frames), scenario.fps))
    return clips[0], clips[1], reference_a, reference_b


def truth_dict(scenario: Scenario) -> dict:
    """JSON-ready ground truth: event frames, corners, homography, ROIs."""
    roi_a = top_edge_roi(scenario.stand_corners_a)
    roi_b = top_edge_roi(scenario.stand_corners_b)
    return {
        "seed": scenario.seed,
        "width": scenario.width,
        "height": scenario.height,
        "fps": scenario.fps,
        "n_frames": scenario.n_frames,
        "event_frame_a": scenario.event_frame_a,
        "event_frame_b": scenario.event_frame_b,
        "true_h": scenario.true_h.m.tolist(),
        "stand_corners_a": [[p.x, p.y] for p in scenario.stand_corners_a],
        "stand_corners_b": [[p.x, p.y] for p in scenario.stand_corners_b],
        "noise_sigma": scenario.noise_sigma,
        "disc_radius": scenario.disc_radius,
        "disc_speed": scenario.disc_speed,
        "roi_a": {"p0": [roi_a.p0.x, roi_a.p0.y], "p1": [roi_a.p1.x, roi_a.p1.y], "thickness": roi_a.thickness},
        "roi_b": {"p0": [roi_b.p0.x, roi_b.p0.y], "p1": [roi_b.p1.x, roi_b.p1.y], "thickness": roi_b.thickness},
    }
