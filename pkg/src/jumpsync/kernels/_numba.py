"""Numba-compiled kernel twins of ``_numpy``.

Scalar loops, same expression order and same double-precision arithmetic as
the numpy backend: outputs must be bit-identical (no fastmath, no fused
multiply-add). Importing this module requires numba; the package falls back
to the numpy backend when it is absent.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def luma_from_rgb(rgb: np.ndarray) -> np.ndarray:
    n = rgb.shape[0]
    out = np.empty(n, dtype=np.uint8)
    for i in range(n):
        y = 0.299 * rgb[i, 0] + 0.587 * rgb[i, 1] + 0.114 * rgb[i, 2]
        y = np.floor(y + 0.5)
        if y > 255.0:
            y = 255.0
        out[i] = np.uint8(y)
    return out


@njit(cache=True)
def blend_u8(a: np.ndarray, b: np.ndarray, alpha: float) -> np.ndarray:
    n = a.shape[0]
    wa = 1.0 - alpha
    out = np.empty(n, dtype=np.uint8)
    for i in range(n):
        v = wa * a[i] + alpha * b[i]
        v = np.floor(v + 0.5)
        if v < 0.0:
            v = 0.0
        elif v > 255.0:
            v = 255.0
        out[i] = np.uint8(v)
    return out


@njit(cache=True)
def warp_bilinear_rgb(
    src: np.ndarray,
    hinv: np.ndarray,
    out_h: int,
    out_w: int,
    fill: np.ndarray,
) -> np.ndarray:
    hsrc = src.shape[0]
    wsrc = src.shape[1]
    out = np.empty((out_h, out_w, 3), dtype=np.uint8)
    for vv in range(out_h):
        dy = vv + 0.5
        for uu in range(out_w):
            dx = uu + 0.5
            xh = hinv[0, 0] * dx + hinv[0, 1] * dy + hinv[0, 2]
            yh = hinv[1, 0] * dx + hinv[1, 1] * dy + hinv[1, 2]
            wh = hinv[2, 0] * dx + hinv[2, 1] * dy + hinv[2, 2]
            inside = np.abs(wh) > 1e-12
            xs = 0.0
            ys = 0.0
            if inside:
                xs = xh / wh - 0.5
                ys = yh / wh - 0.5
                inside = (
                    (xs >= -1e-9)
                    and (xs <= wsrc - 1.0 + 1e-9)
                    and (ys >= -1e-9)
                    and (ys <= hsrc - 1.0 + 1e-9)
                )
            if not inside:
                out[vv, uu, 0] = fill[0]
                out[vv, uu, 1] = fill[1]
                out[vv, uu, 2] = fill[2]
                continue
            xs = min(max(xs, 0.0), wsrc - 1.0)
            ys = min(max(ys, 0.0), hsrc - 1.0)
            x0 = np.floor(xs)
            if x0 > wsrc - 2.0:
                x0 = wsrc - 2.0
            if x0 < 0.0:
                x0 = 0.0
            y0 = np.floor(ys)
            if y0 > hsrc - 2.0:
                y0 = hsrc - 2.0
            if y0 < 0.0:
                y0 = 0.0
            fx = xs - x0
            fy = ys - y0
            x0i = np.int64(x0)
            y0i = np.int64(y0)
            x1i = min(x0i + 1, wsrc - 1)
            y1i = min(y0i + 1, hsrc - 1)
            w00 = (1.0 - fx) * (1.0 - fy)
            w10 = fx * (1.0 - fy)
            w01 = (1.0 - fx) * fy
            w11 = fx * fy
            for c in range(3):
                val = (
                    w00 * src[y0i, x0i, c]
                    + w10 * src[y0i, x1i, c]
                    + w01 * src[y1i, x0i, c]
                    + w11 * src[y1i, x1i, c]
                )
                val = np.floor(val + 0.5)
                if val < 0.0:
                    val = 0.0
                elif val > 255.0:
                    val = 255.0
                out[vv, uu, c] = np.uint8(val)
    return out
