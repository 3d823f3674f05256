"""Bit-exact frame and clip I/O as binary PPM (P6) sequences, plus luma.

Sequences are zero-padded, consecutively numbered files starting at index 0.
A path pattern is either a printf-style template with a single ``%d`` field
(``shots/%06d.ppm``) or a directory, which implies ``<dir>/%06d.ppm``.
Reading fails loudly on gaps instead of skipping indices, and depends only
on file contents, never on directory listing order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from jumpsync import kernels
from jumpsync.errors import SequenceIOError

_WHITESPACE = b" \t\n\r\x0b\x0c"


@dataclass(frozen=True, eq=False)
class Frame:
    """One 8-bit RGB raster; ``pixels`` is (height, width, 3) uint8, row-major."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = self.pixels
        if not isinstance(px, np.ndarray) or px.dtype != np.uint8:
            raise ValueError("frame pixels must be a uint8 numpy array")
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"frame pixels must have shape (h, w, 3), got {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("frame dimensions must be at least 1x1")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def filled(cls, width: int, height: int, rgb: tuple[int, int, int]) -> "Frame":
        """Solid-color frame, used for padding."""
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[:, :] = np.asarray(rgb, dtype=np.uint8)
        return cls(px)


@dataclass(frozen=True, eq=False)
class Clip:
    """Ordered frame sequence with a frame rate; all frames share one raster size."""

    frames: tuple[Frame, ...]
    fps: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "frames", tuple(self.frames))
        if not (self.fps > 0 and np.isfinite(self.fps)):
            raise ValueError(f"fps must be positive and finite, got {self.fps}")
        if self.frames:
            w, h = self.frames[0].width, self.frames[0].height
            for i, f in enumerate(self.frames):
                if f.width != w or f.height != h:
                    raise ValueError(
                        f"frame {i} is {f.width}x{f.height}, expected {w}x{h}"
                    )

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        if not self.frames:
            raise ValueError("empty clip has no dimensions")
        return self.frames[0].width

    @property
    def height(self) -> int:
        if not self.frames:
            raise ValueError("empty clip has no dimensions")
        return self.frames[0].height


@dataclass(frozen=True, eq=False)
class LumaPlane:
    """8-bit luminance samples; ``values`` is (height, width) uint8."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = self.values
        if not isinstance(v, np.ndarray) or v.dtype != np.uint8 or v.ndim != 2:
            raise ValueError("luma values must be a (h, w) uint8 array")

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def to_luma(frame: Frame) -> LumaPlane:
    """Rec.601 luma: Y = round(0.299 R + 0.587 G + 0.114 B), half away from zero."""
    flat = frame.pixels.reshape(-1, 3)
    y = kernels.luma_from_rgb(flat)
    return LumaPlane(y.reshape(frame.height, frame.width))


def _next_token(data: bytes, pos: int, path: Path) -> tuple[bytes, int]:
    """Read one header token, skipping whitespace and # comments."""
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == ord("#"):
            nl = data.find(b"\n", pos)
            if nl == -1:
                raise SequenceIOError(f"{path}: unterminated comment in PPM header")
            pos = nl + 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
        pos += 1
    if start == pos:
        raise SequenceIOError(f"{path}: truncated PPM header")
    return data[start:pos], pos


def _header_int(token: bytes, what: str, path: Path) -> int:
    try:
        return int(token)
    except ValueError:
        raise SequenceIOError(f"{path}: malformed PPM header, bad {what} {token!r}") from None


def read_frame(path: str | Path) -> Frame:
    """Read a single binary PPM (P6, maxval 255) file."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise SequenceIOError(f"cannot read {path}: {e}") from e

    magic, pos = _next_token(data, 0, path)
    if magic != b"P6":
        raise SequenceIOError(f"{path}: not a binary PPM (magic {magic!r}, expected P6)")
    wtok, pos = _next_token(data, pos, path)
    htok, pos = _next_token(data, pos, path)
    mtok, pos = _next_token(data, pos, path)
    width = _header_int(wtok, "width", path)
    height = _header_int(htok, "height", path)
    maxval = _header_int(mtok, "maxval", path)
    if width < 1 or height < 1:
        raise SequenceIOError(f"{path}: invalid dimensions {width}x{height}")
    if maxval != 255:
        raise SequenceIOError(f"{path}: unsupported maxval {maxval} (only 255)")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise SequenceIOError(f"{path}: missing whitespace after maxval")
    pos += 1

    need = width * height * 3
    body = data[pos:]
    if len(body) < need:
        raise SequenceIOError(
            f"{path}: truncated pixel data ({len(body)} bytes, expected {need})"
        )
    if len(body) > need:
        raise SequenceIOError(
            f"{path}: {len(body) - need} trailing bytes after pixel data"
        )
    px = np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3)
    return Frame(px.copy())


def write_frame(path: str | Path, frame: Frame) -> None:
    """Write a single binary PPM (P6) file: header, one newline, raw bytes."""
    path = Path(path)
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(header + np.ascontiguousarray(frame.pixels).tobytes())
    except OSError as e:
        raise SequenceIOError(f"cannot write {path}: {e}") from e


def _pattern_parts(path_pattern: str | Path) -> tuple[Path, str]:
    """Split a sequence pattern into (directory, printf filename template)."""
    p = Path(path_pattern)
    if "%" in p.name:
        parent = p.parent if str(p.parent) else Path(".")
        return parent, p.name
    return p, "%06d.ppm"


def sequence_directory(path_pattern: str | Path) -> Path:
    """Directory a sequence pattern writes into (reports live next to it)."""
    return _pattern_parts(path_pattern)[0]


def _index_regex(fmt: str) -> re.Pattern[str]:
    m = re.fullmatch(r"([^%]*)%0?\d*d([^%]*)", fmt)
    if m is None:
        raise SequenceIOError(
            f"unsupported sequence pattern {fmt!r}: need exactly one %d field"
        )
    return re.compile(re.escape(m.group(1)) + r"(\d+)" + re.escape(m.group(2)))


def _indexed_paths(path_pattern: str | Path) -> list[Path]:
    """All sequence members keyed by index, verified dense from 0."""
    directory, fmt = _pattern_parts(path_pattern)
    rx = _index_regex(fmt)
    if not directory.is_dir():
        raise SequenceIOError(f"no frames found: {directory} is not a directory")
    found: dict[int, Path] = {}
    for child in directory.iterdir():
        m = rx.fullmatch(child.name)
        if m:
            found[int(m.group(1))] = child
    if not found:
        raise SequenceIOError(f"no frames found matching {fmt!r} under {directory}")
    top = max(found)
    for i in range(top + 1):
        if i not in found:
            raise SequenceIOError(f"frame sequence has a gap at index {i} under {directory}")
    return [found[i] for i in range(top + 1)]


def read_frame_sequence(path_pattern: str | Path, fps: float) -> Clip:
    """Read a dense PPM sequence into a Clip, failing on any missing index."""
    frames: list[Frame] = []
    for i, p in enumerate(_indexed_paths(path_pattern)):
        f = read_frame(p)
        if frames and (f.width != frames[0].width or f.height != frames[0].height):
            raise SequenceIOError(
                f"{p}: dimension mismatch {f.width}x{f.height}, "
                f"expected {frames[0].width}x{frames[0].height} (frame {i})"
            )
        frames.append(f)
    return Clip(tuple(frames), fps)


def write_frame_sequence(clip: Clip, path_pattern: str | Path) -> None:
    """Write every frame of a non-empty clip as PPM files per the pattern."""
    if len(clip) == 0:
        raise ValueError("cannot write an empty clip")
    directory, fmt = _pattern_parts(path_pattern)
    _index_regex(fmt)  # validate the pattern before touching the filesystem
    for i, frame in enumerate(clip.frames):
        write_frame(directory / (fmt % i), frame)
