"""Datasets, partitions, centroids and the inertia criteria.

Conventions: points are float64 (n, p) matrices; assignments are 0-based
int64 vectors with -1 marking "not yet classified"; ground-truth labels are
1-based (1..K) to match the exported file convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64


class ModelError(ValueError):
    pass


def _as_points(points) -> np.ndarray:
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ModelError(f"points must be 2-D, got shape {pts.shape}")
    return pts


@dataclass(frozen=True)
class Dataset:
    """Immutable point set with optional ground truth."""

    points: np.ndarray
    name: str = "dataset"
    truth_labels: np.ndarray | None = None
    truth_centroids: np.ndarray | None = None

    def __post_init__(self):
        pts = _as_points(self.points)
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ModelError("dataset needs at least one point and one variable")
        if not np.isfinite(pts).all():
            raise ModelError("dataset contains non-finite coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.truth_labels is not None:
            labels = np.asarray(self.truth_labels, dtype=np.int64)
            if labels.shape != (pts.shape[0],):
                raise ModelError("truth_labels length must equal point count")
            uniq = np.unique(labels)
            if uniq[0] < 1 or not np.array_equal(uniq, np.arange(1, uniq.size + 1)):
                raise ModelError("truth_labels must cover 1..K")
            labels.setflags(write=False)
            object.__setattr__(self, "truth_labels", labels)
        if self.truth_centroids is not None:
            cents = _as_points(self.truth_centroids)
            cents.setflags(write=False)
            object.__setattr__(self, "truth_centroids", cents)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def p(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class BoundingBox:
    """Coordinate-wise hyperrectangle around a point set."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=np.float64)
        hi = np.asarray(self.upper, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ModelError("bounds must be 1-D vectors of equal length")
        if (lo > hi).any():
            raise ModelError("lower bound exceeds upper bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def p(self) -> int:
        return self.lower.shape[0]

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool((x >= self.lower).all() and (x <= self.upper).all())


@dataclass
class AntSolution:
    """One ant's partition: assignment vector, centroids, cached inertia.

    The tabu list is implied by the assignment vector (an index is tabu
    exactly when its entry is set), which keeps the two from drifting apart.
    The inertia cache must be invalidated on any mutation; mutate through
    the module functions or call ``mark_dirty`` after editing arrays.
    """

    assignment: np.ndarray          # (n,) int64, -1 = unclassified
    centroids: np.ndarray           # (K, p) float64
    class_sizes: np.ndarray         # (K,) int64
    _inertia: float | None = field(default=None, repr=False)

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=np.int64)
        self.centroids = np.ascontiguousarray(self.centroids, dtype=np.float64)
        self.class_sizes = np.asarray(self.class_sizes, dtype=np.int64)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def tabu(self) -> set:
        return set(np.flatnonzero(self.assignment >= 0).tolist())

    @property
    def is_complete(self) -> bool:
        return bool((self.assignment >= 0).all())

    def mark_dirty(self):
        self._inertia = None

    def set_inertia(self, w: float):
        self._inertia = float(w)

    def inertia(self, data: Dataset) -> float:
        """Cached within inertia; computed on first access."""
        if self._inertia is None:
            self._inertia = within_inertia(data, self.assignment, self.centroids)
        return self._inertia

    def copy(self) -> "AntSolution":
        out = AntSolution(self.assignment.copy(), self.centroids.copy(),
                          self.class_sizes.copy())
        out._inertia = self._inertia
        return out


def empty_solution(n: int, centroids: np.ndarray) -> AntSolution:
    centroids = np.ascontiguousarray(centroids, dtype=np.float64)
    k = centroids.shape[0]
    return AntSolution(np.full(n, -1, dtype=np.int64), centroids,
                       np.zeros(k, dtype=np.int64))


def squared_distance(a, b) -> float:
    """Squared Euclidean distance between two equal-length vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ModelError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(diff @ diff)


def _check_assigned(assignment: np.ndarray):
    if (assignment < 0).any():
        missing = int(np.flatnonzero(assignment < 0)[0])
        raise ModelError(f"object {missing} is unassigned")


def within_inertia(data: Dataset, assignment, centroids) -> float:
    """Mean squared distance of each point to its class centroid."""
    assignment = np.asarray(assignment, dtype=np.int64)
    centroids = np.asarray(centroids, dtype=np.float64)
    _check_assigned(assignment)
    diffs = data.points - centroids[assignment]
    return float(np.sum(diffs * diffs) / data.n)


def between_inertia(data: Dataset, assignment, centroids) -> float:
    """Size-weighted squared distances of class centroids to the barycenter."""
    assignment = np.asarray(assignment, dtype=np.int64)
    centroids = np.asarray(centroids, dtype=np.float64)
    _check_assigned(assignment)
    k = centroids.shape[0]
    counts = np.bincount(assignment, minlength=k).astype(np.float64)
    g = data.points.mean(axis=0)
    diffs = centroids - g
    return float(np.sum(counts * np.sum(diffs * diffs, axis=1)) / data.n)


def total_inertia(data: Dataset) -> float:
    """Mean squared distance to the overall barycenter (a dataset constant)."""
    g = data.points.mean(axis=0)
    diffs = data.points - g
    return float(np.sum(diffs * diffs) / data.n)


def update_centroid_incremental(solution: AntSolution, k: int, x) -> AntSolution:
    """Fold one freshly added point into centroid k.

    Requires class_sizes[k] to already count the new point; with a new size
    of one the previous (e.g. random-initialization) centroid is discarded.
    """
    if not 0 <= k < solution.k:
        raise ModelError(f"class index {k} out of range")
    x = np.asarray(x, dtype=np.float64)
    size = int(solution.class_sizes[k])
    if size < 1:
        raise ModelError("class size must already include the added point")
    solution.centroids[k] = ((size - 1) * solution.centroids[k] + x) / size
    solution.mark_dirty()
    return solution


def batch_centroids(data: Dataset, assignment, k: int,
                    previous: np.ndarray | None = None) -> np.ndarray:
    """Class means; empty classes keep their previous centroid (zeros if none)."""
    assignment = np.asarray(assignment, dtype=np.int64)
    _check_assigned(assignment)
    sums = np.zeros((k, data.p))
    np.add.at(sums, assignment, data.points)
    counts = np.bincount(assignment, minlength=k).astype(np.float64)
    if previous is None:
        previous = np.zeros((k, data.p))
    nonempty = counts > 0
    out = np.array(previous, dtype=np.float64, copy=True)
    out[nonempty] = sums[nonempty] / counts[nonempty, None]
    return out


def bounding_box(data: Dataset) -> BoundingBox:
    return BoundingBox(data.points.min(axis=0), data.points.max(axis=0))


def uniform_in_box(box: BoundingBox, rng: SplitMix64, count: int) -> np.ndarray:
    """Draw ``count`` points uniformly inside the box (row-major draw order)."""
    span = box.upper - box.lower
    lo = box.lower
    p = box.p
    rows = [[lo[j] + rng.random() * span[j] for j in range(p)]
            for _ in range(count)]
    return np.asarray(rows, dtype=np.float64)
