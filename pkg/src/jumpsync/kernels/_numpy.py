"""Pure-numpy kernel implementations.

This is the reference backend. The numba backend in ``_numba`` mirrors the
exact arithmetic (same expression order, double precision throughout) so the
two produce bit-identical outputs; the parity test suite enforces that.

Rounding convention everywhere: half away from zero, implemented as
``floor(x + 0.5)``, which is equivalent for the non-negative values these
kernels produce, then clamped to [0, 255].
"""

from __future__ import annotations

import numpy as np


def luma_from_rgb(rgb: np.ndarray) -> np.ndarray:
    """Rec.601 luma of an (n, 3) uint8 array, returned as (n,) uint8."""
    r = rgb[:, 0].astype(np.float64)
    g = rgb[:, 1].astype(np.float64)
    b = rgb[:, 2].astype(np.float64)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    y = np.floor(y + 0.5)
    y = np.minimum(y, 255.0)
    return y.astype(np.uint8)


def blend_u8(a: np.ndarray, b: np.ndarray, alpha: float) -> np.ndarray:
    """Per-element (1-alpha)*a + alpha*b over flat uint8 arrays, rounded."""
    wa = 1.0 - alpha
    out = wa * a.astype(np.float64) + alpha * b.astype(np.float64)
    out = np.floor(out + 0.5)
    out = np.minimum(np.maximum(out, 0.0), 255.0)
    return out.astype(np.uint8)


def warp_bilinear_rgb(
    src: np.ndarray,
    hinv: np.ndarray,
    out_h: int,
    out_w: int,
    fill: np.ndarray,
) -> np.ndarray:
    """Inverse-mapped bilinear warp of an (h, w, 3) uint8 frame.

    ``hinv`` maps destination pixel centers (u+0.5, v+0.5) into source
    coordinates. A destination pixel keeps ``fill`` when its source sample
    falls outside the hull of source pixel centers or maps to infinity.
    Samples within 1e-9 px of the hull border are clamped onto it, so exact
    identities, integer translations, and numerically-estimated identities
    (whose entries carry ~1e-16 noise) all stay bit-exact.
    """
    hsrc = src.shape[0]
    wsrc = src.shape[1]

    u = np.arange(out_w, dtype=np.float64) + 0.5
    v = np.arange(out_h, dtype=np.float64) + 0.5
    dx, dy = np.meshgrid(u, v)

    xh = hinv[0, 0] * dx + hinv[0, 1] * dy + hinv[0, 2]
    yh = hinv[1, 0] * dx + hinv[1, 1] * dy + hinv[1, 2]
    wh = hinv[2, 0] * dx + hinv[2, 1] * dy + hinv[2, 2]

    finite = np.abs(wh) > 1e-12
    wsafe = np.where(finite, wh, 1.0)
    xs = xh / wsafe - 0.5
    ys = yh / wsafe - 0.5

    inside = (
        finite
        & (xs >= -1e-9)
        & (xs <= wsrc - 1.0 + 1e-9)
        & (ys >= -1e-9)
        & (ys <= hsrc - 1.0 + 1e-9)
    )
    xs = np.where(inside, xs, 0.0)
    ys = np.where(inside, ys, 0.0)
    xs = np.minimum(np.maximum(xs, 0.0), wsrc - 1.0)
    ys = np.minimum(np.maximum(ys, 0.0), hsrc - 1.0)

    x0 = np.maximum(np.minimum(np.floor(xs), wsrc - 2.0), 0.0)
    y0 = np.maximum(np.minimum(np.floor(ys), hsrc - 2.0), 0.0)
    fx = xs - x0
    fy = ys - y0

    x0i = x0.astype(np.int64)
    y0i = y0.astype(np.int64)
    x1i = np.minimum(x0i + 1, wsrc - 1)
    y1i = np.minimum(y0i + 1, hsrc - 1)

    w00 = (1.0 - fx) * (1.0 - fy)
    w10 = fx * (1.0 - fy)
    w01 = (1.0 - fx) * fy
    w11 = fx * fy

    out = np.empty((out_h, out_w, 3), dtype=np.uint8)
    for c in range(3):
        p00 = src[y0i, x0i, c].astype(np.float64)
        p10 = src[y0i, x1i, c].astype(np.float64)
        p01 = src[y1i, x0i, c].astype(np.float64)
        p11 = src[y1i, x1i, c].astype(np.float64)
        val = w00 * p00 + w10 * p10 + w01 * p01 + w11 * p11
        val = np.floor(val + 0.5)
        val = np.minimum(np.maximum(val, 0.0), 255.0)
        out[:, :, c] = np.where(inside, val, np.float64(fill[c])).astype(np.uint8)
    return out
