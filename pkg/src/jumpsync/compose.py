"""Comparison-video rendering: temporally paired frames, side by side or overlaid."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from jumpsync import kernels
from jumpsync.frame_io import Clip, Frame
from jumpsync.temporal import SyncPlan

logger = logging.getLogger(__name__)

MODES = ("side_by_side", "overlay")


@dataclass(frozen=True)
class CompositeSpec:
    """Presentation mode, overlay weight of clip B, and padding color."""

    mode: str
    alpha: float = 0.5
    pad_color: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        _validate_rgb(self.pad_color, "pad_color")


def _validate_rgb(rgb, what: str) -> None:
    if len(rgb) != 3 or any(not (0 <= int(v) <= 255) for v in rgb):
        raise ValueError(f"{what} must be three channel values in [0, 255], got {rgb}")


@dataclass(frozen=True, eq=False)
class PairedFrames:
    """Temporally aligned frame pairs plus how many had to be padded."""

    pairs: tuple[tuple[Frame, Frame], ...]
    pad_a: int
    pad_b: int


def pair_frames(
    clip_a: Clip,
    clip_b: Clip,
    plan: SyncPlan,
    pad_color: tuple[int, int, int] = (0, 0, 0),
) -> PairedFrames:
    """Pair frame (base_a + k) of A with (base_b + k) of B for k in [-pre, post].

    Where exactly one clip lacks the frame, a solid pad frame of that clip's
    size stands in; if both lack it the window is unusable and this raises.
    """
    if len(clip_a) == 0 or len(clip_b) == 0:
        raise ValueError("cannot pair frames of an empty clip")
    _validate_rgb(pad_color, "pad_color")
    pad_frame_a = Frame.filled(clip_a.width, clip_a.height, pad_color)
    pad_frame_b = Frame.filled(clip_b.width, clip_b.height, pad_color)

    pairs: list[tuple[Frame, Frame]] = []
    pad_a = 0
    pad_b = 0
    for k in range(-plan.pre, plan.post + 1):
        ia = plan.base_a + k
        ib = plan.base_b + k
        have_a = 0 <= ia < len(clip_a)
        have_b = 0 <= ib < len(clip_b)
        if not have_a and not have_b:
            raise ValueError(
                f"no frames available at window offset k={k} "
                f"(A index {ia}, B index {ib})"
            )
        if not have_a:
            pad_a += 1
        if not have_b:
            pad_b += 1
        pairs.append(
            (
                clip_a.frames[ia] if have_a else pad_frame_a,
                clip_b.frames[ib] if have_b else pad_frame_b,
            )
        )
    if pad_a or pad_b:
        logger.info("padded %d frame(s) of A and %d of B at window edges", pad_a, pad_b)
    return PairedFrames(tuple(pairs), pad_a, pad_b)


def side_by_side(a: Frame, b: Frame, pad_color: tuple[int, int, int] = (0, 0, 0)) -> Frame:
    """A on the left, B on the right; vertical slack filled with pad_color."""
    _validate_rgb(pad_color, "pad_color")
    height = max(a.height, b.height)
    out = np.empty((height, a.width + b.width, 3), dtype=np.uint8)
    out[:, :] = np.asarray(pad_color, dtype=np.uint8)
    out[: a.height, : a.width] = a.pixels
    out[: b.height, a.width :] = b.pixels
    return Frame(out)


def overlay(a: Frame, b: Frame, alpha: float) -> Frame:
    """Per channel round((1-alpha)*a + alpha*b), half away from zero."""
    if a.width != b.width or a.height != b.height:
        raise ValueError(
            f"overlay needs equal dimensions, got {a.width}x{a.height} "
            f"and {b.width}x{b.height}"
        )
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    blended = kernels.blend_u8(a.pixels.reshape(-1), b.pixels.reshape(-1), float(alpha))
    return Frame(blended.reshape(a.pixels.shape))


@dataclass(frozen=True, eq=False)
class RenderResult:
    """The composite clip plus pad counts for the output sidecar."""

    clip: Clip
    pad_a: int
    pad_b: int


def render(clip_a: Clip, clip_b_warped: Clip, plan: SyncPlan, spec: CompositeSpec) -> RenderResult:
    """Pair frames per the plan and composite each pair; fps follows clip A.

    For overlay mode, clip_b_warped must already be viewpoint-corrected to
    clip A's frame geometry.
    """
    paired = pair_frames(clip_a, clip_b_warped, plan, spec.pad_color)
    if spec.mode == "overlay":
        frames = tuple(overlay(a, b, spec.alpha) for a, b in paired.pairs)
    else:
        frames = tuple(side_by_side(a, b, spec.pad_color) for a, b in paired.pairs)
    return RenderResult(Clip(frames, clip_a.fps), paired.pad_a, paired.pad_b)
