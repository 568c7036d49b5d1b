"""Seeded Gaussian-mixture generators for the three synthetic benchmark
tables, plus the per-instance ground-truth reference inertia.

The published reference values for these tables came from one unpublished
random draw, so they cannot be regenerated bit-exactly; every generated
instance therefore reports its own reference inertia.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (BoundingBox, Dataset, batch_centroids, within_inertia)

_MASK64 = (1 << 64) - 1


class SynthError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    """Structure of one mixture: per-class sizes and isotropic variances,
    dimension, the box centers are drawn in, and a minimum center spacing."""

    class_sizes: tuple
    class_variances: tuple
    p: int
    center_box: BoundingBox
    min_center_separation: float
    seed: int
    name: str = "synth"

    def __post_init__(self):
        object.__setattr__(self, "class_sizes",
                           tuple(int(s) for s in self.class_sizes))
        object.__setattr__(self, "class_variances",
                           tuple(float(v) for v in self.class_variances))
        if len(self.class_sizes) != len(self.class_variances):
            raise SynthError("class_sizes and class_variances lengths differ")
        if not self.class_sizes:
            raise SynthError("need at least one class")
        if any(s < 1 for s in self.class_sizes):
            raise SynthError("class sizes must be >= 1")
        if any(v <= 0 for v in self.class_variances):
            raise SynthError("class variances must be positive")
        if self.p < 1:
            raise SynthError("p must be >= 1")
        if self.center_box.p != self.p:
            raise SynthError("center_box dimension must equal p")
        if self.min_center_separation < 0:
            raise SynthError("min_center_separation must be nonnegative")

    @property
    def n(self) -> int:
        return sum(self.class_sizes)

    @property
    def k(self) -> int:
        return len(self.class_sizes)


_PRESETS = {
    "t105": ((51, 9, 9, 9, 9, 9, 9), (1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0)),
    "t525": ((265, 44, 43, 43, 43, 43, 44), (1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0)),
    "t2100": ((300,) * 7, (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5)),
}


def preset(name: str, seed: int = 0) -> GeneratorSpec:
    """Named generator structures: t105 (one big class, six small, one
    high-variance), t525 (same shape, larger), t2100 (equal sizes, strictly
    increasing variances).  All use p=6, centers in [0,10]^6, spacing 5."""
    key = name.strip().lower()
    if key not in _PRESETS:
        raise SynthError(f"unknown preset {name!r}; expected one of "
                         f"{', '.join(sorted(_PRESETS))}")
    sizes, variances = _PRESETS[key]
    p = 6
    box = BoundingBox(np.zeros(p), np.full(p, 10.0))
    return GeneratorSpec(sizes, variances, p, box, 5.0, seed, name=key)


def generate(spec: GeneratorSpec) -> Dataset:
    """Draw one instance: centers uniform in the box (redrawn as a set until
    all pairwise distances reach the minimum separation), then class k's
    points i.i.d. isotropic normal around center k.  Labels are 1..K in
    block order; truth centroids are the empirical class means."""
    rng = np.random.default_rng(spec.seed & _MASK64)
    k, p = spec.k, spec.p
    lo, hi = spec.center_box.lower, spec.center_box.upper

    centers = None
    for _attempt in range(1000):
        cand = rng.uniform(lo, hi, size=(k, p))
        if k == 1:
            centers = cand
            break
        diffs = cand[:, None, :] - cand[None, :, :]
        dist = np.sqrt((diffs * diffs).sum(axis=2))
        dist[np.diag_indices(k)] = np.inf
        if dist.min() >= spec.min_center_separation:
            centers = cand
            break
    if centers is None:
        raise SynthError(
            f"could not place {k} centers with pairwise separation >= "
            f"{spec.min_center_separation} in 1000 draws; enlarge the "
            "center box or lower the separation")

    blocks = []
    labels = []
    for idx in range(k):
        sd = math.sqrt(spec.class_variances[idx])
        blocks.append(rng.normal(loc=centers[idx], scale=sd,
                                 size=(spec.class_sizes[idx], p)))
        labels.extend([idx + 1] * spec.class_sizes[idx])
    points = np.vstack(blocks)
    truth_centroids = np.vstack([b.mean(axis=0) for b in blocks])

    return Dataset(points, name=f"{spec.name}-s{spec.seed}",
                   truth_labels=np.array(labels, dtype=np.int64),
                   truth_centroids=truth_centroids)


def reference_inertia(data: Dataset) -> float:
    """Within inertia of the ground-truth partition, with batch centroids."""
    if data.truth_labels is None:
        raise SynthError("dataset has no ground-truth labels")
    assign = data.truth_labels - 1
    k = int(assign.max()) + 1
    cents = batch_centroids(data, assign, k)
    return within_inertia(data, assign, cents)
