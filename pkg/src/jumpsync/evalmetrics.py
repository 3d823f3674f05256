"""Synchronization-accuracy metric: per-trial difference in base-frame errors.

A shared detection bias cancels: what matters for synchronization is how
differently the two views' base frames err, |(detected_a - truth_a) -
(detected_b - truth_b)|, summarized as mean and sample standard deviation
over trials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TrialEval:
    """Detected and true base frames for one trial's two views."""

    detected_a: int
    detected_b: int
    truth_a: int
    truth_b: int

    def __post_init__(self) -> None:
        for name in ("detected_a", "detected_b", "truth_a", "truth_b"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class EvalSummary:
    per_trial: tuple[float, ...]
    mean: float
    sd: float


def difference_in_errors(t: TrialEval) -> float:
    """|(detected_a - truth_a) - (detected_b - truth_b)| in frames."""
    return float(abs((t.detected_a - t.truth_a) - (t.detected_b - t.truth_b)))


def summarize(trials: list[TrialEval]) -> EvalSummary:
    """Mean and sample standard deviation (n-1) of per-trial differences."""
    if len(trials) < 2:
        raise ValueError(f"need at least 2 trials to summarize, got {len(trials)}")
    values = np.array([difference_in_errors(t) for t in trials], dtype=np.float64)
    return EvalSummary(
        per_trial=tuple(float(v) for v in values),
        mean=float(np.mean(values)),
        sd=float(np.std(values, ddof=1)),
    )
