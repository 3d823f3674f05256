from __future__ import annotations

import numpy as np
import pytest

from jumpsync.frame_io import Frame


def pattern_frame(width: int, height: int, salt: int = 0) -> Frame:
    """Deterministic, RNG-free test frame (stable across numpy versions)."""
    y, x = np.mgrid[0:height, 0:width]
    px = np.empty((height, width, 3), dtype=np.uint8)
    px[:, :, 0] = (x * 7 + y * 13 + salt) % 256
    px[:, :, 1] = (x * 5 + y * 3 + 2 * salt + 31) % 256
    px[:, :, 2] = (x * 11 + y + 3 * salt + 77) % 256
    return Frame(px)


def random_frame(rng: np.random.Generator, width: int, height: int) -> Frame:
    return Frame(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
