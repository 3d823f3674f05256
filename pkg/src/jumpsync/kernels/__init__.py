"""Hot pixel kernels: numba-compiled by default, pure numpy on request.

The backend is chosen once at import time. Set ``JUMPSYNC_NO_NUMBA=1`` to
force the pure-numpy fallback; it is also selected automatically when numba
is not installed. Both backends produce bit-identical results, so the flag
only trades compile latency against per-pixel speed. ``benchmarks/
bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

from jumpsync.kernels import _numpy

_FLAG = os.environ.get("JUMPSYNC_NO_NUMBA", "").strip().lower()
_DISABLED = _FLAG in ("1", "true", "yes", "on")

if _DISABLED:
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from jumpsync.kernels import _numba as _impl

        BACKEND = "numba"
    except ImportError:
        _impl = _numpy
        BACKEND = "numpy"

luma_from_rgb = _impl.luma_from_rgb
blend_u8 = _impl.blend_u8
warp_bilinear_rgb = _impl.warp_bilinear_rgb

__all__ = ["BACKEND", "luma_from_rgb", "blend_u8", "warp_bilinear_rgb"]
