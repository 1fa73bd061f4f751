import csv
import io

import numpy as np
import pytest

from prcontrol.generators import random_strongly_connected, star
from prcontrol.graph import parse_edge_list
from prcontrol.solvers import NotStronglyConnectedError, eigenvector_centrality, pagerank, rank_order
from prcontrol.structural import (
    add_self_loop,
    cycle_invariance_demo,
    directed_cycle,
    selfloop_sweep,
    tune_weights_for_eigenvector,
)

from conftest import tm, uniform


def test_c3_weights_closed_form():
    wa = tune_weights_for_eigenvector(directed_cycle(3), [1, 2, 3])
    assert wa.weights[(0, 1)] == pytest.approx(2, rel=1e-15)
    assert wa.weights[(1, 2)] == pytest.approx(1.5, rel=1e-15)
    assert wa.weights[(2, 0)] == pytest.approx(1 / 3, rel=1e-15)
    assert wa.construction_residual <= 1e-15
    assert wa.achieved_eigenvalue == pytest.approx(1, abs=1e-12)
    assert wa.deviation <= 1e-12


def test_uniform_target_splits_in_degree():
    g = random_strongly_connected(9, 6)
    wa = tune_weights_for_eigenvector(g, np.ones(9))
    indeg = np.bincount([d for _, d, _ in g.edges], minlength=9)
    for (s, d), w in wa.weights.items():
        assert w == pytest.approx(1 / indeg[d], rel=1e-14)
    assert wa.deviation <= 1e-8


def test_small_digraph_reverse_ranking():
    g = parse_edge_list("0 1\n1 2\n2 0\n2 3\n3 0\n0 2\n")
    before = rank_order(eigenvector_centrality(g).scores)
    c = np.empty(4)
    c[before] = np.arange(1, 5)  # leader gets the smallest target
    wa = tune_weights_for_eigenvector(g, c)
    assert list(rank_order(wa.achieved.scores)) == list(before[::-1])
    assert wa.deviation <= 1e-8
    assert set(wa.weights) == {(s, d) for s, d, _ in g.edges}
    assert all(w > 0 for w in wa.weights.values())


@pytest.mark.parametrize("seed", range(20))
def test_random_targets_reproduced(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 16))
    g = random_strongly_connected(n, seed)
    c = rng.uniform(0.01, 1, n)
    wa = tune_weights_for_eigenvector(g, c)
    A = wa.graph.adjacency()
    assert np.abs(A.T @ wa.target - wa.target).max() <= 1e-12
    assert wa.deviation <= 1e-8


def test_tune_rejects_bad_input():
    with pytest.raises(NotStronglyConnectedError):
        tune_weights_for_eigenvector(parse_edge_list("0 1\n1 2"), [1, 1, 1])
    with pytest.raises(ValueError):
        tune_weights_for_eigenvector(directed_cycle(3), [1, 0, 1])


def test_cycle_demo_c6():
    demo = cycle_invariance_demo(6, [5, 0.1, 2, 7, 3, 0.5], alpha=0.85)
    assert demo.max_delta <= 1e-12
    assert np.allclose(demo.after, 1 / 6, atol=1e-12)


def test_cycle_demo_c2():
    demo = cycle_invariance_demo(2, [10, 0.1])
    assert np.allclose(demo.after, 0.5, atol=1e-15)


@pytest.mark.parametrize("n", [3, 7, 20, 50])
def test_cycle_invariance_random(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        w = rng.uniform(1e-3, 1e3, n)
        v = rng.dirichlet(np.ones(n))
        demo = cycle_invariance_demo(n, w, alpha=float(rng.uniform(0.05, 0.95)), v=v)
        assert demo.max_delta <= 1e-12


def test_cycle_demo_validates():
    with pytest.raises(ValueError):
        cycle_invariance_demo(1, [1])
    with pytest.raises(ValueError):
        cycle_invariance_demo(3, [1, -1, 1])


def test_selfloop_leaf_ranks_first():
    sw = selfloop_sweep(star(), 2, weights=[1000], alphas=[0.99])
    (w, a, score, rank, ok), = sw.rows
    # ranks first even though 0.99 < 1 - 1/1000: the curve is not a necessary condition
    assert rank == 1 and not ok


def test_selfloop_bound_at_w10():
    sw = selfloop_sweep(star(), 1, weights=[10], alphas=[0.85, 0.9, 0.95])
    assert [r[4] for r in sw.rows] == [False, True, True]
    assert sw.to_dict()["necessary_bound"] == [[10.0, pytest.approx(0.9)]]


def test_selfloop_vanishing_weight():
    g = random_strongly_connected(8, 2)
    base = rank_order(pagerank(tm(g), 0.85, uniform(8)).scores)
    sw = selfloop_sweep(g, 3, weights=[1e-9], alphas=[0.85])
    assert sw.rows[0][3] == int(np.flatnonzero(base == 3)[0]) + 1


def test_selfloop_default_grid_and_csv():
    sw = selfloop_sweep(star(), 2)
    assert len(sw.rows) == 16
    assert (1000.0, 0.99) in sw.top_rank_region
    assert all(ok == (a >= 1 - 1 / w) for w, a, _, _, ok in sw.rows)
    rows = list(csv.reader(io.StringIO(sw.to_csv())))
    assert rows[0] == ["w", "alpha", "score_of_node", "rank_of_node", "bound_satisfied"]
    assert len(rows) == 17
    assert isinstance(sw.monotone_in_weight(), dict)


def test_selfloop_does_not_mutate_input():
    g = star()
    before = g.edges
    add_self_loop(g, 1, 5.0)
    selfloop_sweep(g, 1)
    assert g.edges == before
