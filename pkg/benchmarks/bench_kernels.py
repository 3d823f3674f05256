"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot kernels (warp, blend, luma) on a camera-scale frame and
verifies along the way that both backends agree bit for bit.

    python benchmarks/bench_kernels.py [--width 1920] [--height 1080] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from jumpsync.kernels import _numpy as np_impl

try:
    from jumpsync.kernels import _numba as nb_impl
except ImportError:
    nb_impl = None


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--width", type=int, default=1920)
    parser.add_argument("--height", type=int, default=1080)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    frame = rng.integers(0, 256, size=(args.height, args.width, 3), dtype=np.uint8)
    flat = frame.reshape(-1, 3)
    a = frame.reshape(-1)
    b = rng.integers(0, 256, size=a.shape, dtype=np.uint8)
    h = np.array([[0.98, 0.02, 4.0], [-0.015, 1.01, -3.0], [1e-5, -2e-5, 1.0]])
    hinv = np.linalg.inv(h)
    fill = np.zeros(3, dtype=np.uint8)

    cases = {
        "luma": lambda impl: impl.luma_from_rgb(flat),
        "blend": lambda impl: impl.blend_u8(a, b, 0.5),
        "warp": lambda impl: impl.warp_bilinear_rgb(frame, hinv, args.height, args.width, fill),
    }

    print(f"frame {args.width}x{args.height}, best of {args.repeats}")
    print(f"{'kernel':<8} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for name, call in cases.items():
        ref = call(np_impl)
        t_np = best_of(lambda: call(np_impl), args.repeats)
        if nb_impl is None:
            print(f"{name:<8} {t_np * 1e3:>12.2f} {'n/a':>12} {'n/a':>9}")
            continue
        out = call(nb_impl)  # first call includes JIT compilation
        assert np.array_equal(ref, out), f"{name}: backends disagree"
        t_nb = best_of(lambda: call(nb_impl), args.repeats)
        print(f"{name:<8} {t_np * 1e3:>12.2f} {t_nb * 1e3:>12.2f} {t_np / t_nb:>8.1f}x")

    if nb_impl is None:
        print("numba not installed; only the numpy backend was timed")


if __name__ == "__main__":
    main()
