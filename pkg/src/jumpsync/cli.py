"""Command-line interface and pipeline orchestration.

Subcommands: sync (full pipeline), detect, homography, warp, compose,
synth, eval. The full pipeline runs: load clips, detect the base frame in
each, build the sync plan, estimate the B-to-A homography from the stand
corners, warp clip B, render the composite, write frames plus report.

Exit codes: 0 success, 2 config error, 3 detection failure, 4 geometry
error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from jumpsync import __version__
from jumpsync.compose import MODES, CompositeSpec, render
from jumpsync.errors import (
    ConfigError,
    EventNotFoundError,
    GeometryError,
    JumpsyncError,
    SequenceIOError,
)
from jumpsync.frame_io import (
    read_frame,
    read_frame_sequence,
    sequence_directory,
    write_frame,
    write_frame_sequence,
)
from jumpsync.geometry import Correspondences, Homography, Point2, estimate_homography, warp_clip
from jumpsync.synthetic import generate, make_scenario, truth_dict
from jumpsync.temporal import (
    DEFAULT_ROI_THICKNESS,
    DEFAULT_THRESHOLD,
    DetectionConfig,
    LineRoi,
    detect_base_frame,
    make_sync_plan,
    median_reference,
    write_signal_csv,
)
from jumpsync.evalmetrics import TrialEval, summarize

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DETECT = 3
EXIT_GEOMETRY = 4
EXIT_IO = 5

DEFAULT_FPS = 120.0
DEFAULT_WINDOW_SECONDS = 2.0


@dataclass(frozen=True)
class PipelineConfig:
    """Validated configuration for the full sync pipeline.

    Corner order per video: top-left, top-right, bottom-right, bottom-left
    of the jump stand. Video A is always the reference view; B is warped and
    time-shifted onto A.
    """

    video_a: str
    video_b: str
    output: str
    corners_a: tuple[Point2, ...]
    corners_b: tuple[Point2, ...]
    roi_a: LineRoi
    roi_b: LineRoi
    reference_a: str | None = None
    reference_b: str | None = None
    threshold: float = DEFAULT_THRESHOLD
    pre: int | None = None
    post: int | None = None
    mode: str = "overlay"
    alpha: float = 0.5
    fill: tuple[int, int, int] = (0, 0, 0)
    fps: float = DEFAULT_FPS
    warp_for_side_by_side: bool = True
    signal_csv_a: str | None = None
    signal_csv_b: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e}") from e
        if not isinstance(doc, dict):
            raise ConfigError(f"config {path} must be a JSON object")
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: dict) -> "PipelineConfig":
        known = {
            "video_a", "video_b", "output", "corners_a", "corners_b",
            "roi_a", "roi_b", "reference_a", "reference_b", "threshold",
            "pre", "post", "mode", "alpha", "fill", "fps",
            "warp_for_side_by_side", "signal_csv_a", "signal_csv_b",
        }
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("video_a", "video_b", "output", "corners_a", "corners_b", "roi_a", "roi_b"):
            if key not in doc:
                raise ConfigError(f"config is missing required key {key!r}")
        try:
            fps = float(doc.get("fps", DEFAULT_FPS))
            return cls(
                video_a=str(doc["video_a"]),
                video_b=str(doc["video_b"]),
                output=str(doc["output"]),
                corners_a=_parse_corners(doc["corners_a"], "corners_a"),
                corners_b=_parse_corners(doc["corners_b"], "corners_b"),
                roi_a=_parse_roi(doc["roi_a"], "roi_a"),
                roi_b=_parse_roi(doc["roi_b"], "roi_b"),
                reference_a=doc.get("reference_a"),
                reference_b=doc.get("reference_b"),
                threshold=float(doc.get("threshold", DEFAULT_THRESHOLD)),
                pre=None if doc.get("pre") is None else int(doc["pre"]),
                post=None if doc.get("post") is None else int(doc["post"]),
                mode=str(doc.get("mode", "overlay")),
                alpha=float(doc.get("alpha", 0.5)),
                fill=_parse_rgb(doc.get("fill", (0, 0, 0)), "fill"),
                fps=fps,
                warp_for_side_by_side=bool(doc.get("warp_for_side_by_side", True)),
                signal_csv_a=doc.get("signal_csv_a"),
                signal_csv_b=doc.get("signal_csv_b"),
            )
        except (ValueError, TypeError) as e:
            raise ConfigError(str(e)) from e

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (0.0 <= self.alpha <= 1.0):
            raise ConfigError(f"alpha must be in [0, 1], got {self.alpha}")
        if not (0.0 < self.threshold <= 255.0):
            raise ConfigError(f"threshold must be in (0, 255], got {self.threshold}")
        if self.fps <= 0:
            raise ConfigError(f"fps must be positive, got {self.fps}")
        for name in ("pre", "post"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConfigError(f"{name} must be >= 0, got {v}")

    def window(self) -> tuple[int, int]:
        """Requested (pre, post) in frames; default is 2 seconds each way."""
        default = int(round(DEFAULT_WINDOW_SECONDS * self.fps))
        pre = default if self.pre is None else self.pre
        post = default if self.post is None else self.post
        return pre, post


def _parse_corners(raw, what: str) -> tuple[Point2, ...]:
    if not isinstance(raw, (list, tuple)) or len(raw) != 4:
        raise ValueError(f"{what} must list exactly 4 [x, y] corner pairs")
    points = []
    for i, xy in enumerate(raw):
        if not isinstance(xy, (list, tuple)) or len(xy) != 2:
            raise ValueError(f"{what}[{i}] must be an [x, y] pair")
        points.append(Point2(float(xy[0]), float(xy[1])))
    return tuple(points)


def _parse_roi(raw, what: str) -> LineRoi:
    if not isinstance(raw, dict) or "p0" not in raw or "p1" not in raw:
        raise ValueError(f"{what} must be an object with p0, p1 and optional thickness")
    p0, p1 = raw["p0"], raw["p1"]
    for name, xy in (("p0", p0), ("p1", p1)):
        if not isinstance(xy, (list, tuple)) or len(xy) != 2:
            raise ValueError(f"{what}.{name} must be an [x, y] pair")
    return LineRoi(
        Point2(float(p0[0]), float(p0[1])),
        Point2(float(p1[0]), float(p1[1])),
        int(raw.get("thickness", DEFAULT_ROI_THICKNESS)),
    )


def _parse_rgb(raw, what: str) -> tuple[int, int, int]:
    if isinstance(raw, str):
        raw = raw.split(",")
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise ValueError(f"{what} must be three channel values")
    rgb = tuple(int(v) for v in raw)
    if any(not (0 <= v <= 255) for v in rgb):
        raise ValueError(f"{what} channels must be in [0, 255], got {rgb}")
    return rgb


def _load_reference(path: str | None, clip, csv_note: str):
    if path is not None:
        return read_frame(path)
    logger.info("no reference image for %s; using median of leading frames", csv_note)
    return median_reference(clip)


def run_pipeline(config: PipelineConfig) -> dict:
    """Execute the full pipeline and return the run report."""
    timing: dict[str, float] = {}
    report: dict = {"timing_s": timing}

    def stage(name: str):
        return _StageTimer(name, timing)

    with stage("load"):
        clip_a = read_frame_sequence(config.video_a, config.fps)
        clip_b = read_frame_sequence(config.video_b, config.fps)
        reference_a = _load_reference(config.reference_a, clip_a, "video A")
        reference_b = _load_reference(config.reference_b, clip_b, "video B")

    with stage("detect"):
        try:
            det_a = detect_base_frame(
                clip_a, DetectionConfig(config.threshold, reference_a, config.roi_a)
            )
            det_b = detect_base_frame(
                clip_b, DetectionConfig(config.threshold, reference_b, config.roi_b)
            )
        except ValueError as e:
            raise ConfigError(f"detect: {e}") from e
        if config.signal_csv_a:
            write_signal_csv(config.signal_csv_a, det_a.signal)
        if config.signal_csv_b:
            write_signal_csv(config.signal_csv_b, det_b.signal)

    with stage("plan"):
        pre_req, post_req = config.window()
        # Clamp to frames at least one clip can cover, so padding (not an
        # error) handles the remaining one-sided gaps.
        pre = min(pre_req, max(det_a.base_index, det_b.base_index))
        post = min(
            post_req,
            max(len(clip_a) - 1 - det_a.base_index, len(clip_b) - 1 - det_b.base_index),
        )
        plan = make_sync_plan(det_a.base_index, det_b.base_index, pre, post)

    with stage("homography"):
        try:
            h_b2a = estimate_homography(Correspondences(config.corners_b, config.corners_a))
        except ValueError as e:
            raise ConfigError(f"homography: {e}") from e

    with stage("warp"):
        warp_b = config.mode == "overlay" or config.warp_for_side_by_side
        if warp_b:
            clip_b_final = warp_clip(clip_b, h_b2a, clip_a.width, clip_a.height, config.fill)
        else:
            clip_b_final = clip_b

    with stage("render"):
        spec = CompositeSpec(mode=config.mode, alpha=config.alpha, pad_color=config.fill)
        result = render(clip_a, clip_b_final, plan, spec)

    with stage("write"):
        write_frame_sequence(result.clip, config.output)
        out_dir = sequence_directory(config.output)
        sidecar = {
            "mode": config.mode,
            "alpha": config.alpha,
            "offset": plan.offset,
            "base_a": plan.base_a,
            "base_b": plan.base_b,
            "pad_counts": {"a": result.pad_a, "b": result.pad_b},
        }
        _write_json(out_dir / "sidecar.json", sidecar)

    report.update(
        {
            "base_a": plan.base_a,
            "base_b": plan.base_b,
            "offset": plan.offset,
            "homography_b_to_a": h_b2a.m.tolist(),
            "window": {
                "pre": pre,
                "post": post,
                "requested_pre": pre_req,
                "requested_post": post_req,
            },
            "pad_counts": {"a": result.pad_a, "b": result.pad_b},
            "frames_written": len(result.clip),
            "mode": config.mode,
            "alpha": config.alpha,
            "warped_b": warp_b,
            "output": str(config.output),
        }
    )
    _write_json(sequence_directory(config.output) / "report.json", report)
    return report


class _StageTimer:
    def __init__(self, name: str, timing: dict[str, float]):
        self.name = name
        self.timing = timing

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.timing[self.name] = time.perf_counter() - self.t0
        if exc is not None and isinstance(exc, JumpsyncError):
            logger.error("stage %s failed: %s", self.name, exc)
        return False


def _write_json(path: Path, doc: dict) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise SequenceIOError(f"cannot write {path}: {e}") from e


# --- subcommand argument helpers -------------------------------------------


def _point_arg(text: str) -> Point2:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected x,y - got {text!r}")
    return Point2(float(parts[0]), float(parts[1]))


def _rgb_arg(text: str):
    return _parse_rgb(text, "color")


def _roi_from_args(args) -> LineRoi:
    return LineRoi(args.roi[0], args.roi[1], args.thickness)


def _matrix_from_args(args) -> Homography:
    if args.h_file:
        doc = json.loads(Path(args.h_file).read_text(encoding="utf-8"))
        entries = doc["h"] if isinstance(doc, dict) else doc
        return Homography(np.asarray(entries, dtype=np.float64))
    values = [float(v) for v in args.h.split(",")]
    if len(values) != 9:
        raise ConfigError(f"--h needs 9 comma-separated values, got {len(values)}")
    return Homography(np.asarray(values).reshape(3, 3))


# --- subcommands ------------------------------------------------------------


def cmd_sync(args) -> int:
    config = PipelineConfig.from_file(args.config)
    report = run_pipeline(config)
    print(
        json.dumps(
            {
                "base_a": report["base_a"],
                "base_b": report["base_b"],
                "offset": report["offset"],
                "frames_written": report["frames_written"],
                "output": report["output"],
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def cmd_detect(args) -> int:
    clip = read_frame_sequence(args.frames, args.fps)
    if args.reference:
        reference = read_frame(args.reference)
    else:
        reference = median_reference(clip)
    try:
        config = DetectionConfig(args.threshold, reference, _roi_from_args(args))
        result = detect_base_frame(clip, config)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    if args.signal_csv:
        write_signal_csv(args.signal_csv, result.signal)
    print(
        json.dumps(
            {
                "base_index": result.base_index,
                "frames": len(clip),
                "threshold": args.threshold,
                "max_difference": float(result.signal.max()),
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def cmd_homography(args) -> int:
    h = estimate_homography(Correspondences(tuple(args.src), tuple(args.dst)))
    print(json.dumps({"h": h.m.tolist()}))
    return EXIT_OK


def cmd_warp(args) -> int:
    clip = read_frame_sequence(args.frames, args.fps)
    h = _matrix_from_args(args)
    out_w = args.width or clip.width
    out_h = args.height or clip.height
    try:
        warped = warp_clip(clip, h, out_w, out_h, args.fill)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    write_frame_sequence(warped, args.out)
    print(json.dumps({"frames_written": len(warped), "output": str(args.out)}, sort_keys=True))
    return EXIT_OK


def cmd_compose(args) -> int:
    clip_a = read_frame_sequence(args.frames_a, args.fps)
    clip_b = read_frame_sequence(args.frames_b, args.fps)
    try:
        plan = make_sync_plan(args.base_a, args.base_b, args.pre, args.post)
        spec = CompositeSpec(mode=args.mode, alpha=args.alpha, pad_color=args.pad)
        result = render(clip_a, clip_b, plan, spec)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    write_frame_sequence(result.clip, args.out)
    sidecar = {
        "mode": args.mode,
        "alpha": args.alpha,
        "offset": plan.offset,
        "base_a": plan.base_a,
        "base_b": plan.base_b,
        "pad_counts": {"a": result.pad_a, "b": result.pad_b},
    }
    _write_json(sequence_directory(args.out) / "sidecar.json", sidecar)
    print(json.dumps({"frames_written": len(result.clip), "output": str(args.out)}, sort_keys=True))
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        scenario = make_scenario(
            args.seed,
            noise_sigma=args.noise_sigma,
            n_frames=args.frames,
            width=args.width,
            height=args.height,
            event_frame_a=args.event_a,
            event_frame_b=args.event_b,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e
    clip_a, clip_b, reference_a, reference_b = generate(scenario)
    out = Path(args.out)
    write_frame_sequence(clip_a, out / "a")
    write_frame_sequence(clip_b, out / "b")
    write_frame(out / "ref_a.ppm", reference_a)
    write_frame(out / "ref_b.ppm", reference_b)
    truth = truth_dict(scenario)
    _write_json(out / "truth.json", truth)

    # Ready-to-run pipeline config pointing at the generated footage.
    config = {
        "video_a": str(out / "a"),
        "video_b": str(out / "b"),
        "reference_a": str(out / "ref_a.ppm"),
        "reference_b": str(out / "ref_b.ppm"),
        "corners_a": truth["stand_corners_a"],
        "corners_b": truth["stand_corners_b"],
        "roi_a": truth["roi_a"],
        "roi_b": truth["roi_b"],
        "threshold": DEFAULT_THRESHOLD,
        "pre": 20,
        "post": 20,
        "mode": "overlay",
        "alpha": 0.5,
        "fps": scenario.fps,
        "output": str(out / "composite" / "%06d.ppm"),
    }
    _write_json(out / "config.json", config)
    print(
        json.dumps(
            {
                "event_frame_a": scenario.event_frame_a,
                "event_frame_b": scenario.event_frame_b,
                "out": str(out),
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        doc = json.loads(Path(args.trials).read_text(encoding="utf-8"))
        trials = [
            TrialEval(
                detected_a=int(t["detected_a"]),
                detected_b=int(t["detected_b"]),
                truth_a=int(t["truth_a"]),
                truth_b=int(t["truth_b"]),
            )
            for t in doc
        ]
        summary = summarize(trials)
    except OSError as e:
        raise SequenceIOError(f"cannot read {args.trials}: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed trials file {args.trials}: {e}") from e
    if args.csv:
        lines = ["trial,difference_in_errors\n"]
        lines.extend(f"{i},{v!r}\n" for i, v in enumerate(summary.per_trial))
        Path(args.csv).write_text("".join(lines), encoding="ascii")
    print(f"{summary.mean:.10g} ± {summary.sd:.10g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jumpsync",
        description="Spatiotemporally synchronize two videos of the same jump",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log stage progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sync", help="run the full pipeline from a JSON config")
    p.add_argument("--config", required=True, help="pipeline config JSON")
    p.set_defaults(func=cmd_sync)

    p = sub.add_parser("detect", help="detect the base frame of a clip")
    p.add_argument("--frames", required=True, help="input sequence pattern or directory")
    p.add_argument("--reference", help="athlete-free reference PPM (default: median of leading frames)")
    p.add_argument("--roi", type=_point_arg, nargs=2, required=True, metavar="X,Y",
                   help="ROI segment endpoints")
    p.add_argument("--thickness", type=int, default=DEFAULT_ROI_THICKNESS)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--fps", type=float, default=DEFAULT_FPS)
    p.add_argument("--signal-csv", help="dump the per-frame difference signal")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("homography", help="estimate and print a homography")
    p.add_argument("--src", type=_point_arg, nargs=4, required=True, metavar="X,Y",
                   help="source corners: top-left top-right bottom-right bottom-left")
    p.add_argument("--dst", type=_point_arg, nargs=4, required=True, metavar="X,Y")
    p.set_defaults(func=cmd_homography)

    p = sub.add_parser("warp", help="warp a sequence by a homography")
    p.add_argument("--frames", required=True)
    p.add_argument("--h", help="9 comma-separated row-major matrix entries")
    p.add_argument("--h-file", help="JSON file with the matrix (as from `homography`)")
    p.add_argument("--width", type=int, help="output width (default: input)")
    p.add_argument("--height", type=int, help="output height (default: input)")
    p.add_argument("--fill", type=_rgb_arg, default=(0, 0, 0), help="R,G,B for unmapped pixels")
    p.add_argument("--fps", type=float, default=DEFAULT_FPS)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_warp)

    p = sub.add_parser("compose", help="pair and composite two pre-aligned clips")
    p.add_argument("--frames-a", required=True)
    p.add_argument("--frames-b", required=True)
    p.add_argument("--base-a", type=int, required=True)
    p.add_argument("--base-b", type=int, required=True)
    p.add_argument("--pre", type=int, required=True)
    p.add_argument("--post", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default="overlay")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--pad", type=_rgb_arg, default=(0, 0, 0))
    p.add_argument("--fps", type=float, default=DEFAULT_FPS)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("synth", help="generate a synthetic two-view trial with truth")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--frames", type=int, default=120)
    p.add_argument("--width", type=int, default=320)
    p.add_argument("--height", type=int, default=180)
    p.add_argument("--event-a", type=int, help="override the seeded event frame of view A")
    p.add_argument("--event-b", type=int, help="override the seeded event frame of view B")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="summarize difference-in-errors over trials")
    p.add_argument("--trials", required=True, help="JSON list of detected/truth base frames")
    p.add_argument("--csv", help="write per-trial differences as CSV")
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except EventNotFoundError as e:
        print(f"detection failed: {e}", file=sys.stderr)
        return EXIT_DETECT
    except GeometryError as e:
        print(f"geometry error: {e}", file=sys.stderr)
        return EXIT_GEOMETRY
    except SequenceIOError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
