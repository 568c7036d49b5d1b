"""Lloyd local search, bare multistart K-means, and the hybrid colony run.

The hybrid run is the colony loop with every ant refined by Lloyd steps at
the end of each iteration; refined centroids seed the next construction.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .colony import AcoParams, _materialize_ant, _run_colony
from .metrics import RunRecord
from .model import (AntSolution, Dataset, batch_centroids, bounding_box,
                    uniform_in_box)
from .rng import SplitMix64


class KMeansError(ValueError):
    pass


@dataclass(frozen=True)
class KMeansConfig:
    convergence_tol: float = 1e-4
    max_iter: int = 500

    def __post_init__(self):
        if self.convergence_tol <= 0:
            raise KMeansError("convergence_tol must be positive")
        if self.max_iter < 1:
            raise KMeansError("max_iter must be >= 1")


def _nearest_assign(points: np.ndarray, cents: np.ndarray) -> np.ndarray:
    d2 = ((points[:, None, :] - cents[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)        # ties break to the lowest index


def _within(points: np.ndarray, assign: np.ndarray, cents: np.ndarray) -> float:
    diffs = points - cents[assign]
    return float((diffs * diffs).sum()) / points.shape[0]


def _lloyd_arrays(points: np.ndarray, cents0: np.ndarray,
                  assignment: np.ndarray | None,
                  tol: float, max_iter: int):
    """Lloyd iteration on raw arrays; returns (assign, cents, w, steps).

    Stops once two successive W values differ by less than tol.  A complete
    input assignment provides the starting W; otherwise the first comparison
    is against +inf, so at least two steps run from bare centroids.
    """
    cents = np.array(cents0, dtype=np.float64, copy=True)
    k = cents.shape[0]
    if assignment is not None and (np.asarray(assignment) >= 0).all():
        w = _within(points, np.asarray(assignment, dtype=np.int64), cents)
    else:
        w = math.inf
    assign = None
    steps = 0
    while steps < max_iter:
        prev = w
        assign = _nearest_assign(points, cents)
        sums = np.zeros_like(cents)
        np.add.at(sums, assign, points)
        counts = np.bincount(assign, minlength=k).astype(np.float64)
        nonempty = counts > 0
        cents[nonempty] = sums[nonempty] / counts[nonempty, None]
        w = _within(points, assign, cents)
        steps += 1
        if abs(prev - w) < tol:
            break
    return assign, cents, w, steps


def lloyd_step(data: Dataset, solution: AntSolution) -> AntSolution:
    """One Lloyd step: reassign every object to its nearest centroid, then
    recompute barycenters (empty classes keep their centroid) and W."""
    assign = _nearest_assign(data.points, solution.centroids)
    cents = batch_centroids(data, assign, solution.k,
                            previous=solution.centroids)
    out = AntSolution(assign, cents,
                      np.bincount(assign, minlength=solution.k))
    out.set_inertia(_within(data.points, assign, cents))
    return out


def kmeans_local_search(data: Dataset, solution: AntSolution,
                        config: KMeansConfig | None = None) -> AntSolution:
    """Refine a solution with Lloyd steps until W stabilizes within
    convergence_tol (or max_iter); never returns a worse W."""
    config = config or KMeansConfig()
    assign, cents, w, _steps = _lloyd_arrays(
        data.points, solution.centroids, solution.assignment,
        config.convergence_tol, config.max_iter)
    out = AntSolution(assign, cents, np.bincount(assign, minlength=solution.k))
    out.set_inertia(w)
    return out


def run_km(data: Dataset, k_clusters: int, seed: int = 0,
           config: KMeansConfig | None = None,
           reference_w: float | None = None,
           hit_rel_tol: float = 1e-4):
    """Plain K-means from centroids drawn uniformly in the bounding box;
    returns (solution, record)."""
    if k_clusters < 1:
        raise KMeansError("k_clusters must be >= 1")
    config = config or KMeansConfig()
    t0 = time.perf_counter()
    root = SplitMix64(seed)
    init_rng = SplitMix64(root.next_u64())
    cents0 = uniform_in_box(bounding_box(data), init_rng, k_clusters)
    assign, cents, w, steps = _lloyd_arrays(
        data.points, cents0, None, config.convergence_tol, config.max_iter)
    elapsed = time.perf_counter() - t0

    solution = AntSolution(assign, cents,
                           np.bincount(assign, minlength=k_clusters))
    solution.set_inertia(w)
    hit = False
    if reference_w is not None and reference_w > 0:
        hit = abs(w - reference_w) / reference_w <= hit_rel_tol
    record = RunRecord(algorithm="KM", seed=seed, final_w=w, iterations=steps,
                       elapsed_seconds=elapsed, hit=hit)
    return solution, record


def _refine_ants(state, data: Dataset, params: AcoParams,
                 config: KMeansConfig) -> None:
    """Refine every ant in ant-index order; adopt strict improvements."""
    for m in range(state.m_ants):
        assign, cents, w, _steps = _lloyd_arrays(
            data.points, state.centroids[m], state.assignments[m],
            config.convergence_tol, config.max_iter)
        state.assignments[m] = assign
        state.centroids[m] = cents
        state.class_sizes[m] = np.bincount(assign, minlength=params.k_clusters)
        state.ant_w[m] = w
        if w < state.best_w:
            state.best_w = w
            state.best = _materialize_ant(state, m)


def run_bacok(data: Dataset, params: AcoParams,
              config: KMeansConfig | None = None,
              reference_w: float | None = None):
    """Hybrid run: the colony loop with per-ant Lloyd refinement each
    iteration; returns (best, record)."""
    config = config or KMeansConfig()

    def refine(state):
        _refine_ants(state, data, params, config)

    return _run_colony(data, params, algorithm="BACOK", refine=refine,
                       reference_w=reference_w)
