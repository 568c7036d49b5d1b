"""Colony mechanics: assignment law, roulette, trail updates, outer loop."""

import math

import numpy as np
import pytest

import oracles
from acoclust.colony import (AcoError, AcoParams, PheromoneMatrix,
                             _best_ant_update, assignment_probabilities,
                             construct_iteration, global_pheromone_update,
                             init_colony, intensify_best, roulette_select,
                             run_baco, visibility)
from acoclust.model import (AntSolution, Dataset, bounding_box,
                            empty_solution, within_inertia)
from acoclust.rng import SplitMix64


def _two_pairs(scale=0.5, per=5, seed=1):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(per, 2)) * scale
    b = rng.normal(size=(per, 2)) * scale + 10.0
    return Dataset(np.vstack([a, b]), name="two-pairs")


def test_params_validation():
    good = dict(k_clusters=3)
    AcoParams(**good)
    for bad in [dict(k_clusters=0), dict(alpha=-0.1, **good),
                dict(beta=-1.0, **good), dict(rho=1.5, **good),
                dict(rho=-0.1, **good), dict(q=0.0, **good),
                dict(m_ants=0, **good), dict(stagnation_limit=0, **good),
                dict(tau0=0.0, **good), dict(d_epsilon=0.0, **good),
                dict(hit_rel_tol=0.0, **good)]:
        with pytest.raises(AcoError):
            AcoParams(**bad)
    assert AcoParams(k_clusters=2).with_seed(9).seed == 9


def test_pheromone_matrix_validation():
    PheromoneMatrix(np.ones((3, 2)))
    for bad in [np.ones(3), np.array([[1.0, -1.0]]), np.array([[np.nan]])]:
        with pytest.raises(AcoError):
            PheromoneMatrix(bad)


def test_visibility_values():
    assert visibility(np.array([0.0, 0.0]), np.array([2.0, 0.0])) == 0.25
    assert visibility(np.array([0.0]), np.array([3.0])) == 1.0 / 9.0
    # coincident centroid is floored, not infinite
    assert visibility(np.array([1.0]), np.array([1.0])) == 1e12
    assert visibility(np.array([1.0]), np.array([1.0]), 1e-6) == 1e6


def test_probabilities_hand_case():
    # tau symmetric, squared distances (4, 1), beta=1: weights (1/4, 1)
    data = Dataset(np.array([[0.0]]))
    ant = empty_solution(1, np.array([[2.0], [1.0]]))
    gamma = PheromoneMatrix(np.ones((1, 2)))
    params = AcoParams(k_clusters=2, alpha=1.0, beta=1.0)
    probs = assignment_probabilities(data, 0, ant, gamma, params)
    np.testing.assert_allclose(probs, [0.2, 0.8], rtol=0, atol=1e-15)


def test_probabilities_sum_to_one():
    rng = np.random.default_rng(44)
    for _ in range(50):
        n = int(rng.integers(2, 30))
        p = int(rng.integers(1, 5))
        k = int(rng.integers(2, 6))
        data = Dataset(rng.normal(size=(n, p)) * 5.0)
        ant = empty_solution(n, rng.uniform(-5, 5, size=(k, p)))
        gamma = PheromoneMatrix(rng.uniform(1e-3, 3.0, size=(n, k)))
        params = AcoParams(k_clusters=k, alpha=float(rng.uniform(0, 2)),
                           beta=float(rng.uniform(0, 4)))
        probs = assignment_probabilities(data, int(rng.integers(0, n)),
                                         ant, gamma, params)
        assert abs(probs.sum() - 1.0) <= 1e-12
        assert (probs >= 0).all()


def test_probabilities_symmetric_case_uniform():
    data = Dataset(np.array([[0.0, 0.0]]))
    cents = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    ant = empty_solution(1, cents)
    gamma = PheromoneMatrix(np.full((1, 4), 0.7))
    params = AcoParams(k_clusters=4, alpha=0.25, beta=2.5)
    probs = assignment_probabilities(data, 0, ant, gamma, params)
    np.testing.assert_array_equal(probs, np.full(4, 0.25))


def test_probabilities_zero_exponents_uniform():
    data = Dataset(np.array([[3.0], [0.0]]))
    ant = empty_solution(2, np.array([[0.1], [9.0], [4.0]]))
    gamma = PheromoneMatrix(np.array([[5.0, 0.01, 2.0], [1.0, 1.0, 1.0]]))
    params = AcoParams(k_clusters=3, alpha=0.0, beta=0.0)
    probs = assignment_probabilities(data, 0, ant, gamma, params)
    np.testing.assert_allclose(probs, np.full(3, 1 / 3), rtol=0, atol=1e-15)


def test_probabilities_trail_scale_invariance():
    data = Dataset(np.array([[1.0, -2.0]]))
    ant = empty_solution(1, np.array([[0.0, 0.0], [3.0, 1.0], [1.0, 5.0]]))
    params = AcoParams(k_clusters=3, alpha=0.7, beta=2.5)
    row = np.array([[0.2, 1.3, 0.04]])
    base = assignment_probabilities(data, 0, ant, PheromoneMatrix(row), params)
    # power-of-two scaling cancels exactly in the max-ratio form
    four = assignment_probabilities(data, 0, ant, PheromoneMatrix(row * 4.0),
                                    params)
    np.testing.assert_array_equal(four, base)
    three = assignment_probabilities(data, 0, ant, PheromoneMatrix(row * 3.0),
                                     params)
    np.testing.assert_allclose(three, base, rtol=1e-14, atol=0)


def test_probabilities_vanishing_total_raises():
    data = Dataset(np.array([[0.0]]))
    ant = empty_solution(1, np.array([[1e9], [0.0]]))
    gamma = PheromoneMatrix(np.array([[1.0, 0.0]]))
    params = AcoParams(k_clusters=2, alpha=1.0, beta=800.0)
    with pytest.raises(AcoError, match="vanished"):
        assignment_probabilities(data, 0, ant, gamma, params)


def test_probabilities_large_beta_tracks_nearest():
    rng = np.random.default_rng(15)
    params = AcoParams(k_clusters=4, alpha=0.25, beta=120.0)
    for _ in range(20):
        data = Dataset(rng.normal(size=(6, 3)) * 4.0)
        ant = empty_solution(6, rng.uniform(-8, 8, size=(4, 3)))
        gamma = PheromoneMatrix(rng.uniform(0.5, 1.5, size=(6, 4)))
        i = int(rng.integers(0, 6))
        probs = assignment_probabilities(data, i, ant, gamma, params)
        nearest = oracles.nearest_labels(data.points[i:i + 1], ant.centroids)[0]
        assert int(np.argmax(probs)) == int(nearest)
        # concentration, with headroom for near-ties in random geometry
        assert probs[nearest] > 0.99


def test_roulette_degenerate_and_bounds():
    rng = SplitMix64(31)
    assert all(roulette_select([0.0, 1.0], rng) == 1 for _ in range(200))
    assert all(roulette_select([1.0, 0.0], rng) == 0 for _ in range(200))
    with pytest.raises(AcoError):
        roulette_select([0.7, 0.7], rng)
    with pytest.raises(AcoError):
        roulette_select([-0.2, 1.2], rng)


def test_roulette_never_picks_zero_probability_class():
    rng = SplitMix64(77)
    counts = np.zeros(3, dtype=np.int64)
    for _ in range(20000):
        counts[roulette_select([0.5, 0.0, 0.5], rng)] += 1
    assert counts[1] == 0


def test_roulette_frequencies_match_probabilities():
    rng = SplitMix64(123)
    probs = [0.2, 0.8]
    draws = 100000
    counts = np.zeros(2, dtype=np.int64)
    for _ in range(draws):
        counts[roulette_select(probs, rng)] += 1
    for k, pk in enumerate(probs):
        sigma = oracles.binomial_sigma(pk, draws)
        assert abs(counts[k] - draws * pk) <= 5 * sigma


def test_init_colony_layout():
    data = _two_pairs()
    params = AcoParams(k_clusters=2, m_ants=6, seed=4, tau0=0.25)
    state = init_colony(data, params)
    box = bounding_box(data)
    assert state.centroids.shape == (6, 2, 2)
    for m in range(6):
        for c in state.centroids[m]:
            assert box.contains(c)
    np.testing.assert_array_equal(state.gamma.values, np.full((10, 2), 0.25))
    np.testing.assert_array_equal(state.gamma_aux.values, np.zeros((10, 2)))
    assert (state.assignments == -1).all()
    assert len(set(state.ant_states.tolist())) == 6
    assert math.isinf(state.best_w) and state.counter == 0

    again = init_colony(data, params)
    np.testing.assert_array_equal(again.centroids, state.centroids)
    np.testing.assert_array_equal(again.ant_states, state.ant_states)


def test_first_construction_independent_of_tau0():
    # uniform trail rows cancel in the max-ratio weights, so the first
    # sweep depends only on visibility and the streams
    data = _two_pairs(seed=3)
    a = init_colony(data, AcoParams(k_clusters=2, m_ants=4, seed=9, tau0=1e-3))
    b = init_colony(data, AcoParams(k_clusters=2, m_ants=4, seed=9, tau0=7.0))
    construct_iteration(a, data, AcoParams(k_clusters=2, m_ants=4, seed=9))
    construct_iteration(b, data, AcoParams(k_clusters=2, m_ants=4, seed=9))
    np.testing.assert_array_equal(a.assignments, b.assignments)


def test_construct_iteration_state():
    data = _two_pairs(seed=6)
    params = AcoParams(k_clusters=3, m_ants=5, seed=2)
    state = construct_iteration(init_colony(data, params), data, params)
    assert (state.assignments >= 0).all()
    for m in range(5):
        np.testing.assert_array_equal(
            np.bincount(state.assignments[m], minlength=3),
            state.class_sizes[m])
        recomputed = within_inertia(data, state.assignments[m],
                                    state.centroids[m])
        assert state.ant_w[m] == recomputed
    assert (state.gamma_aux.values >= 0).all()
    assert (state.gamma_aux.values.sum(axis=1) > 0).all()


def test_deposits_scale_linearly_in_q():
    data = _two_pairs(seed=8)
    base = AcoParams(k_clusters=2, m_ants=3, seed=5, q=250.0)
    double = AcoParams(k_clusters=2, m_ants=3, seed=5, q=500.0)
    s1 = construct_iteration(init_colony(data, base), data, base)
    s2 = construct_iteration(init_colony(data, double), data, double)
    # q never enters selection, so the sweeps match and deposits double
    np.testing.assert_array_equal(s1.assignments, s2.assignments)
    np.testing.assert_array_equal(s2.gamma_aux.values,
                                  2.0 * s1.gamma_aux.values)


def test_global_update_blend():
    gamma = PheromoneMatrix(np.array([[1.0, 3.0]]))
    aux = PheromoneMatrix(np.array([[5.0, 1.0]]))
    global_pheromone_update(gamma, aux, 0.5)
    np.testing.assert_array_equal(gamma.values, [[3.0, 2.0]])

    keep = PheromoneMatrix(np.array([[1.0, 3.0]]))
    global_pheromone_update(keep, aux, 0.0)
    np.testing.assert_array_equal(keep.values, [[1.0, 3.0]])

    swap = PheromoneMatrix(np.array([[1.0, 3.0]]))
    global_pheromone_update(swap, aux, 1.0)
    np.testing.assert_array_equal(swap.values, [[5.0, 1.0]])

    with pytest.raises(AcoError, match="shape"):
        global_pheromone_update(gamma, PheromoneMatrix(np.ones((2, 2))), 0.5)


def test_intensify_touches_exactly_the_best_arcs():
    base = np.full((3, 2), 1.5)
    gamma = PheromoneMatrix(base.copy())
    best = AntSolution(np.array([0, 1, 0]), np.zeros((2, 1)),
                       np.array([2, 1]))
    best.set_inertia(7.62467183)
    assert intensify_best(gamma, best, 250.0)
    inc = 250.0 / 7.62467183
    arcs = (np.arange(3), np.array([0, 1, 0]))
    expected = base.copy()
    expected[arcs] += inc
    np.testing.assert_array_equal(gamma.values, expected)
    # a second pass accumulates
    intensify_best(gamma, best, 250.0)
    expected[arcs] += inc
    np.testing.assert_array_equal(gamma.values, expected)


def test_intensify_guards():
    gamma = PheromoneMatrix(np.ones((2, 2)))
    incomplete = AntSolution(np.array([0, -1]), np.zeros((2, 1)),
                             np.array([1, 0]))
    incomplete.set_inertia(1.0)
    with pytest.raises(AcoError, match="unclassified"):
        intensify_best(gamma, incomplete, 250.0)

    complete = AntSolution(np.array([0, 1]), np.zeros((2, 1)),
                           np.array([1, 1]))
    with pytest.raises(AcoError, match="cached"):
        intensify_best(gamma, complete, 250.0)
    with pytest.raises(AcoError, match="invalid"):
        intensify_best(gamma, complete, 250.0, w=math.inf)

    # zero inertia: report a skip and leave the trail untouched
    before = gamma.values.copy()
    assert intensify_best(gamma, complete, 250.0, w=0.0) is False
    np.testing.assert_array_equal(gamma.values, before)


def test_best_ant_update_strict_improvement_only():
    data = _two_pairs(seed=2)
    params = AcoParams(k_clusters=2, m_ants=3, seed=1)
    state = construct_iteration(init_colony(data, params), data, params)
    _best_ant_update(state)
    first = state.best
    assert state.best_w == state.ant_w.min()
    # a tie must keep the incumbent object
    state.ant_w[:] = state.best_w
    _best_ant_update(state)
    assert state.best is first
    state.ant_w[1] = state.best_w / 2.0
    _best_ant_update(state)
    assert state.best is not first and state.best_w == state.ant_w[1]


def test_best_w_nonincreasing_over_iterations():
    data = _two_pairs(seed=10)
    params = AcoParams(k_clusters=2, m_ants=4, seed=3)
    state = init_colony(data, params)
    history = []
    for _ in range(8):
        construct_iteration(state, data, params)
        _best_ant_update(state)
        global_pheromone_update(state.gamma, state.gamma_aux, params.rho)
        intensify_best(state.gamma, state.best, params.q, w=state.best_w)
        history.append(state.best_w)
    assert all(b <= a for a, b in zip(history, history[1:]))


def test_run_baco_deterministic():
    data = _two_pairs(seed=12)
    params = AcoParams(k_clusters=2, m_ants=5, seed=21)
    best1, rec1 = run_baco(data, params)
    best2, rec2 = run_baco(data, params)
    assert rec1.final_w == rec2.final_w
    assert rec1.iterations == rec2.iterations
    np.testing.assert_array_equal(best1.assignment, best2.assignment)
    np.testing.assert_array_equal(best1.centroids, best2.centroids)
    assert rec1.algorithm == "BACO" and rec1.seed == 21
    assert rec1.iterations >= params.stagnation_limit + 1


def test_run_baco_multistart_finds_exhaustive_optimum():
    data = _two_pairs(scale=0.5, per=5, seed=1)
    w_star, _ = oracles.brute_force_w(data.points, 2)
    params = AcoParams(k_clusters=2)
    hits = 0
    for seed in range(40):
        _, rec = run_baco(data, params.with_seed(seed), reference_w=w_star)
        assert rec.final_w >= w_star - 1e-12 * abs(w_star)
        hits += abs(rec.final_w - w_star) / w_star <= 1e-9
    assert hits >= 36    # >= 90% of seeds


def test_run_baco_hit_flag():
    data = _two_pairs(seed=14)
    params = AcoParams(k_clusters=2, seed=6)
    _, rec = run_baco(data, params, reference_w=None)
    assert rec.hit is False
    _, rec_hit = run_baco(data, params, reference_w=rec.final_w)
    assert rec_hit.hit is True
    _, rec_miss = run_baco(data, params, reference_w=rec.final_w * 10.0)
    assert rec_miss.hit is False


def test_stagnation_on_improvement_free_colony():
    # all points coincide: every partition has W = 0, nothing ever improves
    data = Dataset(np.tile([[0.5, 2.0]], (20, 1)), name="coincident")
    params = AcoParams(k_clusters=3, m_ants=4, seed=0)
    best, rec = run_baco(data, params)
    assert rec.iterations == params.stagnation_limit + 1
    assert rec.final_w == 0.0
    assert rec.intensification_skipped is True
    assert best.is_complete

    short = AcoParams(k_clusters=3, m_ants=4, seed=0, stagnation_limit=3)
    _, rec3 = run_baco(data, short)
    assert rec3.iterations == 4
