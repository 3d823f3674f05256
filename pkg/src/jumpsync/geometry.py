"""Homography estimation and inverse-mapped bilinear frame warping.

Estimation is the normalized direct linear transform: Hartley-normalize both
point sets (centroid at the origin, mean distance sqrt(2)), take the
smallest right singular vector of the 2n x 9 design matrix, denormalize and
canonicalize. Works for n = 4 exactly and n > 4 in the least-squares sense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from jumpsync import kernels
from jumpsync.errors import GeometryError
from jumpsync.frame_io import Clip, Frame

_W_EPS = 1e-12
_COLLINEAR_TOL = 1e-9


@dataclass(frozen=True)
class Point2:
    """A 2-D point in pixel coordinates."""

    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


def _canonicalize(m: np.ndarray) -> np.ndarray:
    """Scale to Frobenius norm 1 with the last nonzero entry (row-major) positive."""
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (3, 3):
        raise GeometryError(f"homography matrix must be 3x3, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise GeometryError("homography matrix has non-finite entries")
    norm = float(np.linalg.norm(m))
    if not (norm > 0 and math.isfinite(norm)):
        raise GeometryError("homography matrix is zero")
    m = m / norm
    flat = m.ravel()
    sign = 0.0
    for i in range(8, -1, -1):
        if abs(flat[i]) > _W_EPS:
            sign = flat[i]
            break
    if sign == 0.0:
        raise GeometryError("homography matrix is numerically zero")
    if sign < 0:
        m = -m
    return m


@dataclass(frozen=True, eq=False)
class Homography:
    """A 3x3 projective transform between image planes, stored canonically.

    Construction canonicalizes the matrix and rejects singular ones, so every
    Homography instance is invertible and two equal transforms have literally
    equal matrices.
    """

    m: np.ndarray

    def __post_init__(self) -> None:
        canon = _canonicalize(self.m)
        if abs(float(np.linalg.det(canon))) <= _W_EPS:
            raise GeometryError("homography matrix is singular")
        canon.setflags(write=False)
        object.__setattr__(self, "m", canon)

    @classmethod
    def identity(cls) -> "Homography":
        return cls(np.eye(3))

    def apply(self, p: Point2) -> Point2:
        """Map a point with perspective division: (X/W, Y/W) for H (x, y, 1)."""
        m = self.m
        w = m[2, 0] * p.x + m[2, 1] * p.y + m[2, 2]
        if abs(w) <= _W_EPS:
            raise GeometryError(f"point ({p.x}, {p.y}) maps to infinity")
        x = (m[0, 0] * p.x + m[0, 1] * p.y + m[0, 2]) / w
        y = (m[1, 0] * p.x + m[1, 1] * p.y + m[1, 2]) / w
        return Point2(x, y)

    def invert(self) -> "Homography":
        try:
            inv = np.linalg.inv(self.m)
        except np.linalg.LinAlgError as e:
            raise GeometryError(f"homography is not invertible: {e}") from e
        return Homography(inv)


def _as_xy(points: tuple[Point2, ...]) -> np.ndarray:
    return np.array([[p.x, p.y] for p in points], dtype=np.float64)


def _hartley_normalize(xy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (T, normalized points): centroid to origin, mean distance sqrt(2)."""
    centroid = xy.mean(axis=0)
    d = xy - centroid
    mean_dist = float(np.mean(np.hypot(d[:, 0], d[:, 1])))
    if mean_dist <= _W_EPS:
        raise GeometryError("degenerate configuration: points are coincident")
    s = math.sqrt(2.0) / mean_dist
    t = np.array(
        [[s, 0.0, -s * centroid[0]], [0.0, s, -s * centroid[1]], [0.0, 0.0, 1.0]]
    )
    return t, d * s


def _check_collinearity(xy: np.ndarray, label: str) -> None:
    """Reject any collinear triple (on Hartley-normalized coordinates)."""
    _, norm = _hartley_normalize(xy)
    for i, j, k in combinations(range(len(norm)), 3):
        a, b, c = norm[i], norm[j], norm[k]
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(cross) < _COLLINEAR_TOL:
            raise GeometryError(
                f"degenerate configuration: {label} points {i}, {j}, {k} are collinear"
            )


@dataclass(frozen=True)
class Correspondences:
    """Matched point sets (>= 4 pairs) defining a plane-to-plane transform."""

    src: tuple[Point2, ...]
    dst: tuple[Point2, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "src", tuple(self.src))
        object.__setattr__(self, "dst", tuple(self.dst))
        if len(self.src) != len(self.dst):
            raise GeometryError(
                f"src has {len(self.src)} points but dst has {len(self.dst)}"
            )
        if len(self.src) < 4:
            raise GeometryError(f"need at least 4 correspondences, got {len(self.src)}")
        for label, pts in (("src", self.src), ("dst", self.dst)):
            xy = _as_xy(pts)
            for i, j in combinations(range(len(xy)), 2):
                if np.hypot(*(xy[i] - xy[j])) <= _W_EPS:
                    raise GeometryError(f"duplicate points {i} and {j} in {label}")
            if len(pts) == 4:
                _check_collinearity(xy, label)


def estimate_homography(c: Correspondences) -> Homography:
    """Estimate the canonical homography mapping c.src onto c.dst (normalized DLT)."""
    src = _as_xy(c.src)
    dst = _as_xy(c.dst)
    t_src, src_n = _hartley_normalize(src)
    t_dst, dst_n = _hartley_normalize(dst)

    n = len(src_n)
    a = np.zeros((2 * n, 9), dtype=np.float64)
    for i in range(n):
        x, y = src_n[i]
        u, v = dst_n[i]
        a[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, -u]
        a[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y, -v]

    _, s, vt = np.linalg.svd(a)
    # A rank below 8 leaves the solution ambiguous (collinear-ish data).
    if s[7] <= 1e-10 * s[0]:
        raise GeometryError("degenerate configuration: correspondences underdetermine H")
    h_norm = vt[-1].reshape(3, 3)
    h = np.linalg.inv(t_dst) @ h_norm @ t_src
    return Homography(h)


def warp_frame(
    src: Frame,
    h: Homography,
    out_width: int,
    out_height: int,
    fill: tuple[int, int, int] = (0, 0, 0),
) -> Frame:
    """Warp a frame by h using inverse mapping with bilinear interpolation.

    Each destination pixel center (u+0.5, v+0.5) is pulled back through
    h^-1 and bilinearly sampled from the source; destinations without a
    source sample get the fill color.
    """
    if out_width < 1 or out_height < 1:
        raise ValueError(f"output dimensions must be positive, got {out_width}x{out_height}")
    fill_arr = np.asarray(fill, dtype=np.int64)
    if fill_arr.shape != (3,) or fill_arr.min() < 0 or fill_arr.max() > 255:
        raise ValueError(f"fill must be three channel values in [0, 255], got {fill}")
    hinv = h.invert().m
    out = kernels.warp_bilinear_rgb(
        src.pixels, hinv, int(out_height), int(out_width), fill_arr.astype(np.uint8)
    )
    return Frame(out)


def warp_clip(
    clip: Clip,
    h: Homography,
    out_width: int,
    out_height: int,
    fill: tuple[int, int, int] = (0, 0, 0),
) -> Clip:
    """Warp every frame of a clip; fps is preserved."""
    frames = tuple(warp_frame(f, h, out_width, out_height, fill) for f in clip.frames)
    return Clip(frames, clip.fps)
