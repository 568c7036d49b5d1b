"""Ant-colony engine: pheromone state, assignment law, construction sweep,
evaporation and intensification, and the stagnation-stopped outer loop.

Each run owns one colony.  Per iteration every ant builds a complete
partition object by object (all ants advance together), the best partition
ever seen is kept, deposits collected during construction are blended into
the trail matrix, and the best ant reinforces its own trail.  The run stops
after a fixed number of consecutive iterations without improvement.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .metrics import RunRecord
from .model import (AntSolution, Dataset, bounding_box, empty_solution,
                    squared_distance, uniform_in_box)
from .rng import SplitMix64


class AcoError(ValueError):
    pass


@dataclass(frozen=True)
class AcoParams:
    """Colony parameters; the defaults are the tuned operating point."""

    k_clusters: int
    alpha: float = 0.25
    beta: float = 2.5
    rho: float = 0.5
    q: float = 250.0
    m_ants: int = 20
    stagnation_limit: int = 10
    seed: int = 0
    tau0: float = 1e-3
    d_epsilon: float = 1e-12
    hit_rel_tol: float = 1e-4

    def __post_init__(self):
        if self.k_clusters < 1:
            raise AcoError("k_clusters must be >= 1")
        if self.alpha < 0 or self.beta < 0:
            raise AcoError("alpha and beta must be nonnegative")
        if not 0.0 <= self.rho <= 1.0:
            raise AcoError("rho must lie in [0, 1]")
        if self.q <= 0:
            raise AcoError("q must be positive")
        if self.m_ants < 1:
            raise AcoError("m_ants must be >= 1")
        if self.stagnation_limit < 1:
            raise AcoError("stagnation_limit must be >= 1")
        if self.tau0 <= 0:
            raise AcoError("tau0 must be positive")
        if self.d_epsilon <= 0:
            raise AcoError("d_epsilon must be positive")
        if self.hit_rel_tol <= 0:
            raise AcoError("hit_rel_tol must be positive")

    def with_seed(self, seed: int) -> "AcoParams":
        return replace(self, seed=seed)


@dataclass
class PheromoneMatrix:
    """n x K nonnegative trail intensities."""

    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise AcoError(f"pheromone matrix must be 2-D, got shape {v.shape}")
        if not np.isfinite(v).all() or (v < 0).any():
            raise AcoError("pheromone entries must be finite and nonnegative")
        self.values = v

    @property
    def shape(self) -> tuple:
        return self.values.shape


@dataclass
class ColonyState:
    """Everything one colony mutates while it runs.

    Per-ant data is stored as stacked arrays (leading axis = ant index) so
    the construction kernel can run over all ants at once; the ants property
    wraps views of those rows, so treat the returned solutions as read-only.
    """

    assignments: np.ndarray        # (M, n) int64, -1 = unclassified
    centroids: np.ndarray          # (M, K, p)
    class_sizes: np.ndarray        # (M, K) int64
    ant_w: np.ndarray              # (M,) cached per-ant W
    ant_states: np.ndarray         # (M,) uint64 per-ant RNG states
    gamma: PheromoneMatrix
    gamma_aux: PheromoneMatrix
    best: AntSolution
    best_w: float = math.inf
    counter: int = 0
    iteration: int = 0
    intensification_skipped: bool = False

    @property
    def m_ants(self) -> int:
        return self.assignments.shape[0]

    @property
    def ants(self) -> list:
        out = []
        for m in range(self.m_ants):
            ant = AntSolution(self.assignments[m], self.centroids[m],
                              self.class_sizes[m])
            if math.isfinite(self.ant_w[m]):
                ant.set_inertia(float(self.ant_w[m]))
            out.append(ant)
        return out


def visibility(x, centroid, d_epsilon: float = 1e-12) -> float:
    """Attractiveness of a class for an object: 1 / squared distance,
    floored at d_epsilon so a coincident centroid stays finite."""
    return 1.0 / max(squared_distance(x, centroid), d_epsilon)


def assignment_probabilities(data: Dataset, i: int, ant: AntSolution,
                             gamma: PheromoneMatrix,
                             params: AcoParams) -> np.ndarray:
    """Probability of each class for object i: trail^alpha * visibility^beta,
    normalized over classes.

    Evaluated through ratios to the row maxima, which is algebraically the
    same vector but cannot overflow at large exponents.
    """
    gi = gamma.values[i]
    tau_max = float(gi.max())
    if tau_max <= 0.0:
        tau_max = 1.0
    diffs = ant.centroids - data.points[i]
    d = np.maximum((diffs * diffs).sum(axis=1), params.d_epsilon)
    d_min = float(d.min())
    w = (gi / tau_max) ** params.alpha * (d_min / d) ** params.beta
    total = float(w.sum())
    if not math.isfinite(total) or total <= 0.0:
        raise AcoError("assignment probabilities vanished for every class")
    return w / total


def roulette_select(probs, rng: SplitMix64) -> int:
    """Draw a class index with the given probabilities.

    Scans the cumulative sums against one uniform variate; if rounding
    leaves the draw above the final cumulative value, the last class with
    positive probability wins, so zero-probability classes are never picked.
    """
    p = np.asarray(probs, dtype=np.float64)
    if (p < 0).any():
        raise AcoError("negative probability entry")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise AcoError(f"probabilities sum to {total}, expected 1")
    u = rng.random()
    cum = 0.0
    last_positive = -1
    for k, pk in enumerate(p.tolist()):
        if pk > 0.0:
            last_positive = k
        cum += pk
        if u < cum:
            return k
    return last_positive


def init_colony(data: Dataset, params: AcoParams) -> ColonyState:
    """Fresh colony: uniform trail at tau0, random centroids in the data's
    bounding box, empty tabu lists, best sentinel at +inf."""
    mm, kk = params.m_ants, params.k_clusters
    box = bounding_box(data)
    root = SplitMix64(params.seed)
    init_rng = SplitMix64(root.next_u64())
    cents = np.empty((mm, kk, data.p), dtype=np.float64)
    for m in range(mm):
        cents[m] = uniform_in_box(box, init_rng, kk)
    states = np.array([root.next_u64() for _ in range(mm)], dtype=np.uint64)
    best = empty_solution(data.n, cents[0])
    best.set_inertia(math.inf)
    return ColonyState(
        assignments=np.full((mm, data.n), -1, dtype=np.int64),
        centroids=cents,
        class_sizes=np.zeros((mm, kk), dtype=np.int64),
        ant_w=np.full(mm, math.inf),
        ant_states=states,
        gamma=PheromoneMatrix(np.full((data.n, kk), params.tau0)),
        gamma_aux=PheromoneMatrix(np.zeros((data.n, kk))),
        best=best,
    )


def construct_iteration(state: ColonyState, data: Dataset,
                        params: AcoParams) -> ColonyState:
    """Run one construction sweep: every ant classifies every object.

    Clears assignments, class sizes and the deposit matrix, then delegates
    the interleaved object/ant loop to the active kernel backend and caches
    each ant's resulting W.  Centroids seed from their current values (the
    previous iteration's barycenters after the first pass).
    """
    state.assignments.fill(-1)
    state.class_sizes.fill(0)
    state.gamma_aux.values.fill(0.0)
    kernels.construct_sweep(
        data.points, state.gamma.values, state.gamma_aux.values,
        state.centroids, state.assignments, state.class_sizes,
        state.ant_states, float(params.alpha), float(params.beta),
        float(params.q), float(params.d_epsilon))
    for m in range(state.m_ants):
        diffs = data.points - state.centroids[m][state.assignments[m]]
        state.ant_w[m] = float((diffs * diffs).sum()) / data.n
    return state


def global_pheromone_update(gamma: PheromoneMatrix, gamma_aux: PheromoneMatrix,
                            rho: float) -> PheromoneMatrix:
    """Blend deposits into the trail: (1 - rho) * old + rho * deposits."""
    if gamma.values.shape != gamma_aux.values.shape:
        raise AcoError(f"shape mismatch: {gamma.values.shape} "
                       f"vs {gamma_aux.values.shape}")
    gamma.values[:, :] = (1.0 - rho) * gamma.values + rho * gamma_aux.values
    return gamma


def intensify_best(gamma: PheromoneMatrix, best: AntSolution, q: float,
                   w: float | None = None) -> bool:
    """Reinforce the best partition's trail by q / W along its assignments.

    Returns False without touching gamma when W is zero (a degenerate
    perfect clustering, where the reinforcement quotient is undefined).
    """
    if w is None:
        w = best._inertia
    if w is None:
        raise AcoError("best solution has no cached inertia")
    if not best.is_complete:
        raise AcoError("best solution has unclassified objects")
    if not math.isfinite(w) or w < 0:
        raise AcoError(f"invalid inertia {w}")
    if w == 0.0:
        return False
    n = best.assignment.shape[0]
    gamma.values[np.arange(n), best.assignment] += q / w
    return True


def _materialize_ant(state: ColonyState, m: int) -> AntSolution:
    ant = AntSolution(state.assignments[m].copy(), state.centroids[m].copy(),
                      state.class_sizes[m].copy())
    ant.set_inertia(float(state.ant_w[m]))
    return ant


def _best_ant_update(state: ColonyState) -> None:
    # strict improvement only: ties keep the incumbent
    m = int(np.argmin(state.ant_w))
    if state.ant_w[m] < state.best_w:
        state.best_w = float(state.ant_w[m])
        state.best = _materialize_ant(state, m)


def _run_colony(data: Dataset, params: AcoParams, *, algorithm: str,
                refine=None, reference_w: float | None = None):
    """Shared outer loop.

    Per iteration: bump the stagnation counter, construct, keep the best
    ant, blend deposits into the trail, intensify along the best partition,
    optionally refine every ant (the hybrid hook), and reset the counter on
    a strict improvement over the previous best.  The first construction
    only establishes the baseline; it does not count as an improvement, so
    an improvement-free colony stops after exactly stagnation_limit + 1
    iterations.
    """
    t0 = time.perf_counter()
    state = init_colony(data, params)
    while state.counter <= params.stagnation_limit:
        state.iteration += 1
        state.counter += 1
        w_before = state.best_w
        construct_iteration(state, data, params)
        _best_ant_update(state)
        global_pheromone_update(state.gamma, state.gamma_aux, params.rho)
        state.gamma_aux.values.fill(0.0)
        if not intensify_best(state.gamma, state.best, params.q,
                              w=state.best_w):
            state.intensification_skipped = True
        if refine is not None:
            refine(state)
        if state.best_w < w_before and math.isfinite(w_before):
            state.counter = 0
    elapsed = time.perf_counter() - t0

    hit = False
    if reference_w is not None:
        if reference_w > 0:
            hit = abs(state.best_w - reference_w) / reference_w <= params.hit_rel_tol
        else:
            hit = state.best_w == reference_w
    record = RunRecord(algorithm=algorithm, seed=params.seed,
                       final_w=state.best_w, iterations=state.iteration,
                       elapsed_seconds=elapsed, hit=hit,
                       intensification_skipped=state.intensification_skipped)
    return state.best, record


def run_baco(data: Dataset, params: AcoParams,
             reference_w: float | None = None):
    """Full constructive run without local search; returns (best, record)."""
    return _run_colony(data, params, algorithm="BACO", refine=None,
                       reference_w=reference_w)
