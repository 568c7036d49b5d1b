"""Run telemetry, multistart summaries and the centroid-index measure."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class MetricsError(ValueError):
    pass


ALGORITHMS = ("KM", "BACO", "BACOK")


@dataclass
class RunRecord:
    """Outcome of one seeded run.

    intensification_skipped is in-memory telemetry for the degenerate
    zero-inertia case; the serialized schema is exactly the six keys
    {algorithm, seed, final_w, iterations, elapsed_seconds, hit}.
    """

    algorithm: str
    seed: int
    final_w: float
    iterations: int
    elapsed_seconds: float
    hit: bool
    intensification_skipped: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise MetricsError(f"unknown algorithm {self.algorithm!r}")
        if self.final_w < 0 or not math.isfinite(self.final_w):
            raise MetricsError("final_w must be finite and nonnegative")
        if self.elapsed_seconds < 0:
            raise MetricsError("elapsed_seconds must be nonnegative")
        if self.iterations < 0:
            raise MetricsError("iterations must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": int(self.seed),
            "final_w": float(self.final_w),
            "iterations": int(self.iterations),
            "elapsed_seconds": float(self.elapsed_seconds),
            "hit": bool(self.hit),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(algorithm=d["algorithm"], seed=int(d["seed"]),
                   final_w=float(d["final_w"]), iterations=int(d["iterations"]),
                   elapsed_seconds=float(d["elapsed_seconds"]), hit=bool(d["hit"]))


CSV_COLUMNS = ("performance_pct", "w_stddev", "time_mean", "time_stddev")


@dataclass
class SummaryStats:
    """Multistart aggregate in the benchmark-table column order."""

    performance_pct: float
    w_stddev: float
    time_mean: float
    time_stddev: float
    runs: int

    def __post_init__(self):
        if not 0.0 <= self.performance_pct <= 100.0:
            raise MetricsError("performance_pct must lie in [0, 100]")
        if self.w_stddev < 0 or self.time_stddev < 0:
            raise MetricsError("standard deviations must be nonnegative")
        if self.runs < 1:
            raise MetricsError("runs must be >= 1")

    def to_dict(self) -> dict:
        return {
            "performance_pct": float(self.performance_pct),
            "w_stddev": float(self.w_stddev),
            "time_mean": float(self.time_mean),
            "time_stddev": float(self.time_stddev),
            "runs": int(self.runs),
        }

    def csv_row(self) -> list:
        return [self.performance_pct, self.w_stddev,
                self.time_mean, self.time_stddev]


def centroid_index(a, b) -> int:
    """Bidirectional nearest-centroid orphan count (0 = structural match).

    Map every centroid of one set to its nearest neighbour in the other and
    count targets that receive no mapping; the index is the worse direction.
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise MetricsError("centroid sets must be nonempty")
    if a.shape[1] != b.shape[1]:
        raise MetricsError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")

    def orphans(src: np.ndarray, dst: np.ndarray) -> int:
        d2 = ((src[:, None, :] - dst[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argmin(d2, axis=1)
        covered = np.zeros(dst.shape[0], dtype=bool)
        covered[nearest] = True
        return int((~covered).sum())

    return max(orphans(a, b), orphans(b, a))


def performance_percentage(records: Sequence[RunRecord] | Iterable[RunRecord],
                           w_reference: float,
                           rel_tol: float = 1e-4) -> SummaryStats:
    """Share of runs whose final W matches the reference, plus spread stats.

    A run hits when |final_w - w_reference| / w_reference <= rel_tol.  The
    W and time standard deviations are population values over all runs.
    """
    records = list(records)
    if not records:
        raise MetricsError("need at least one run record")
    if w_reference <= 0 or not math.isfinite(w_reference):
        raise MetricsError("w_reference must be positive and finite")
    ws = np.array([r.final_w for r in records], dtype=np.float64)
    ts = np.array([r.elapsed_seconds for r in records], dtype=np.float64)
    hits = int((np.abs(ws - w_reference) / w_reference <= rel_tol).sum())
    return SummaryStats(
        performance_pct=100.0 * hits / len(records),
        w_stddev=float(ws.std(ddof=0)),
        time_mean=float(ts.mean()),
        time_stddev=float(ts.std(ddof=0)),
        runs=len(records),
    )
