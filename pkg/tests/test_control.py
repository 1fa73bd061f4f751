import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prcontrol.control import (
    InfeasibleTargetError,
    existence_check,
    invert_personalization,
    invert_personalization_npr,
    mpr_reduce,
    ranking_bound,
    ranking_feasible,
    realize_npr_as_pr,
)
from prcontrol.generators import bidirected_pair, directed_cycle, random_strongly_connected, star
from prcontrol.solvers import npr_pagerank, pagerank, rank_order

from conftest import random_instances, tm, uniform


# -- existence -------------------------------------------------------------

def test_star_feasible_at_030():
    rep = existence_check(uniform(4), tm(star()), 0.3)
    assert rep.feasible and rep.status == "feasible"
    assert abs(rep.margins[0] - 0.025) <= 1e-12
    assert np.allclose(rep.margins[1:], 0.25 - 0.3 / 12, atol=1e-15)
    assert rep.violated_nodes == []
    assert rep.bound == {"max_colsum": 3.0, "alpha_max": 1 / 3, "effective_alpha": 0.3}


def test_star_infeasible_at_034():
    rep = existence_check(uniform(4), tm(star()), 0.34)
    assert not rep.feasible and rep.status == "infeasible"
    assert abs(rep.margins[0] + 0.005) <= 1e-12
    assert [j for j, _ in rep.violated_nodes] == [0]
    assert rep.witness is None


@pytest.mark.parametrize("alpha", [0.01, 0.5, 0.99])
def test_pair_always_feasible(alpha):
    rep = existence_check(uniform(2), tm(bidirected_pair()), alpha)
    assert rep.feasible
    assert np.allclose(rep.margins, (1 - alpha) / 2, atol=1e-15)


def test_boundary_reported():
    rep = existence_check(uniform(4), tm(star()), 1 / 3)
    assert rep.status == "boundary" and not rep.feasible


def test_target_validation():
    with pytest.raises(ValueError):
        existence_check([0.5, 0.5, 0.0, 0.0], tm(star()), 0.3)
    with pytest.raises(ValueError):
        existence_check([0.3, 0.3, 0.3, 0.3], tm(star()), 0.3)


def test_npr_exact_and_bound_margins_on_star():
    rep = existence_check(uniform(4), tm(star()), [0.3, 0.1, 0.1, 0.1])
    assert rep.feasible
    assert np.allclose(rep.margins, [0.175, 0.225, 0.225, 0.225], atol=1e-15)
    assert np.allclose(rep.bound_margins, [0.025, 0.225, 0.225, 0.225], atol=1e-15)
    assert np.allclose(rep.witness, np.array([0.175, 0.225, 0.225, 0.225]) / 0.85, atol=1e-15)


def test_npr_exact_margins_decide_when_bound_fails():
    # max alpha = 0.9 fails the bound at the hub, yet the exact margins are positive
    P = tm(star())
    rep = existence_check(uniform(4), P, [0.9, 0.1, 0.1, 0.1])
    assert rep.feasible and rep.bound_margins[0] < 0
    w = invert_personalization_npr(uniform(4), P, [0.9, 0.1, 0.1, 0.1])
    assert np.abs(npr_pagerank(P, [0.9, 0.1, 0.1, 0.1], w).scores - 0.25).sum() < 1e-12


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 15), seed=st.integers(0, 10**6))
def test_npr_bound_margins_equal_standard_at_max(n, seed):
    rng = np.random.default_rng(seed)
    P = tm(random_strongly_connected(n, seed))
    a = rng.uniform(0.05, 0.95, n)
    pi0 = rng.dirichlet(np.ones(n))
    npr = existence_check(pi0, P, a)
    std = existence_check(pi0, P, float(a.max()))
    assert np.array_equal(npr.bound_margins, std.margins)
    if std.feasible:
        assert npr.feasible


# -- inversion -------------------------------------------------------------

def test_star_inversion_closed_form():
    v = invert_personalization(uniform(4), tm(star()), 0.3)
    assert np.allclose(v, np.array([1, 9, 9, 9]) / 28, rtol=0, atol=1e-15)
    assert v[0] == pytest.approx(0.035714, abs=1e-6) and v[1] == pytest.approx(0.321429, abs=1e-6)


def test_cycle_inversion_uniform():
    assert np.allclose(invert_personalization(uniform(6), tm(directed_cycle(6)), 0.85),
                       1 / 6, atol=1e-15)


def test_inversion_refuses_infeasible():
    with pytest.raises(InfeasibleTargetError, match="nodes 0"):
        invert_personalization(uniform(4), tm(star()), 0.34)
    with pytest.raises(ValueError):
        invert_personalization(uniform(4), tm(star()), [0.3, 0.1, 0.1, 0.1])


def test_round_trips_standard():
    for g, alpha, v in random_instances(100, 11, n_max=20):
        P = tm(g)
        pi = pagerank(P, alpha, v).scores
        v2 = invert_personalization(pi, P, alpha)
        assert np.abs(v2 - v).sum() <= 1e-10
        assert np.abs(pagerank(P, alpha, v2).scores - pi).sum() <= 1e-10


def test_round_trips_npr():
    rng = np.random.default_rng(12)
    for g, _, w in random_instances(100, 12, n_max=20):
        P = tm(g)
        a = rng.uniform(0.05, 0.95, g.n)
        pi = npr_pagerank(P, a, w).scores
        w2 = invert_personalization_npr(pi, P, a)
        assert np.abs(w2 - w).sum() <= 1e-10
        assert abs(w2.sum() - 1) <= 1e-12
        assert np.abs(npr_pagerank(P, a, w2).scores - pi).sum() <= 1e-10


def test_npr_inversion_c3_round_trip():
    P, a = tm(directed_cycle(3)), [0.2, 0.5, 0.8]
    w = np.array([0.5, 0.3, 0.2])
    pi = npr_pagerank(P, a, w).scores
    assert np.abs(invert_personalization_npr(pi, P, a) - w).sum() < 1e-13


def test_npr_inversion_equal_dampings_matches_standard():
    P = tm(random_strongly_connected(8, 2))
    pi = pagerank(P, 0.6, np.random.default_rng(2).dirichlet(np.ones(8))).scores
    assert np.abs(invert_personalization_npr(pi, P, np.full(8, 0.6))
                  - invert_personalization(pi, P, 0.6)).max() < 1e-15


@settings(max_examples=80, deadline=None)
@given(n=st.integers(2, 12), seed=st.integers(0, 10**6),
       a1=st.floats(0.01, 0.98), a2=st.floats(0.01, 0.98))
def test_feasible_set_shrinks_with_alpha(n, seed, a1, a2):
    lo, hi = sorted((a1, a2))
    P = tm(random_strongly_connected(n, seed))
    pi0 = np.random.default_rng(seed).dirichlet(np.ones(n))
    if existence_check(pi0, P, hi).feasible:
        assert existence_check(pi0, P, lo).feasible


# -- ranking bound ---------------------------------------------------------

def test_ranking_bound_examples():
    c6 = ranking_bound(tm(directed_cycle(6)), 0.99)
    assert c6.max_colsum == 1 and c6.alpha_max == 1 and c6.controllable
    s = ranking_bound(tm(star()), 0.3)
    assert s.max_colsum == 3 and s.alpha_max == pytest.approx(1 / 3) and s.controllable
    assert ranking_bound(tm(star()), 0.5).status == "not-controllable"
    assert ranking_bound(tm(star()), 1 / 3).status == "boundary"


def test_ranking_bound_threshold_for_085():
    # a graph controllable at 0.85 needs max column sum below 1/0.85
    g = random_strongly_connected(10, 5)
    b = ranking_bound(tm(g), 0.85)
    assert b.controllable == (b.max_colsum < 1 / 0.85)
    assert 1 / 0.85 == pytest.approx(1.1765, abs=1e-4)


def test_npr_ranking_bound_uses_max_and_reports_center():
    b = ranking_bound(tm(star()), [0.9, 0.1, 0.1, 0.1])
    assert b.effective_alpha == 0.9 and not b.controllable
    assert b.weighted_max_colsum == pytest.approx(0.3) and b.center_feasible


@pytest.mark.parametrize("seed", range(15))
def test_bound_consistency_uniform_target(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    P = tm(random_strongly_connected(n, seed, p=0.3))
    am = ranking_bound(P, 0.5).alpha_max
    for alpha in np.linspace(0.01, 0.99, 25):
        if alpha < am - 1e-6:
            assert existence_check(uniform(n), P, alpha).feasible
        elif alpha > am + 1e-6:
            assert not existence_check(uniform(n), P, alpha).feasible


# -- cross-variant realization ---------------------------------------------

def test_realize_equal_dampings_gives_w():
    g = random_strongly_connected(7, 8)
    w = np.random.default_rng(8).dirichlet(np.ones(7))
    r = realize_npr_as_pr(tm(g, w), np.full(7, 0.6), w, 0.6)
    assert r.feasible and np.abs(r.v - w).sum() < 1e-13 and r.residual < 1e-12


def test_realize_c3():
    r = realize_npr_as_pr(tm(directed_cycle(3)), [0.2, 0.5, 0.8], uniform(3), 0.2)
    # w_A = (55, 34, 40)/69; margins w_A - 0.2 * shift(w_A)
    w_a = np.array([55, 34, 40]) / 69
    assert np.allclose(r.margins, w_a - 0.2 * np.roll(w_a, 1), atol=1e-15)
    assert r.feasible and r.residual <= 1e-10
    assert np.all(r.v > 0) and abs(r.v.sum() - 1) < 1e-15


def test_realize_star_infeasible():
    r = realize_npr_as_pr(tm(star()), [0.9, 0.1, 0.1, 0.1], uniform(4), 0.95)
    assert not r.feasible and r.v is None
    assert [j for j, _ in r.violated_nodes] == [0]


def test_realize_random_instances():
    rng = np.random.default_rng(21)
    hits = 0
    for g, alpha, w in random_instances(60, 21, n_max=15):
        P = tm(g, w)
        a = rng.uniform(0.05, 0.95, g.n)
        r = realize_npr_as_pr(P, a, w, alpha)
        if r.feasible:
            hits += 1
            assert r.residual <= 1e-10 and np.all(r.v > 0)
        else:
            assert r.violated_nodes
    assert hits > 0


def test_mpr_reduce_rank_one():
    g = random_strongly_connected(9, 4)
    u = np.random.default_rng(4).dirichlet(np.ones(9))
    red = mpr_reduce(tm(g, u), 0.8, np.tile(u, (9, 1)))
    assert np.abs(red.v - u).sum() <= 1e-12 and red.identity_residual <= 1e-12


def test_mpr_reduce_c3_shift():
    m = 0.97 * np.roll(np.eye(3), 2, axis=1) + 0.01
    red = mpr_reduce(tm(directed_cycle(3)), 0.5, m)
    assert red.identity_residual <= 1e-10


@pytest.mark.parametrize("seed", range(10))
def test_mpr_reduce_random(seed):
    rng = np.random.default_rng(seed)
    m = rng.dirichlet(np.ones(10), size=10)
    red = mpr_reduce(tm(random_strongly_connected(10, seed), m), 0.7, m)
    assert red.identity_residual <= 1e-10
    assert np.all(red.v > 0) and abs(red.v.sum() - 1) < 1e-14


# -- ranking control ---------------------------------------------------------

def test_star_all_rankings_at_030():
    P = tm(star())
    for perm in itertools.permutations(range(4)):
        chk = ranking_feasible(P, 0.3, perm)
        assert chk.achievable and chk.method == "center"
        assert tuple(rank_order(pagerank(P, 0.3, chk.witness).scores)) == perm
        assert np.all(chk.witness > 0)


def test_cycle_all_rankings():
    P = tm(directed_cycle(6))
    for perm in itertools.permutations(range(6)):
        assert ranking_feasible(P, 0.85, perm).achievable


def test_star_hub_last_infeasible_at_05():
    chk = ranking_feasible(tm(star()), 0.5, (1, 2, 3, 0))
    assert not chk.achievable
    assert chk.center.status == "infeasible" and chk.center.margins[0] < 0
    assert chk.lp_value < 0
    hub_first = ranking_feasible(tm(star()), 0.5, (0, 1, 2, 3))
    assert hub_first.achievable and hub_first.method == "lp"


def test_ranking_must_be_permutation():
    with pytest.raises(ValueError):
        ranking_feasible(tm(star()), 0.3, (0, 1, 1, 2))


def test_npr_ranking_center():
    P, a = tm(star()), [0.3, 0.1, 0.1, 0.1]
    for perm in [(1, 2, 3, 0), (3, 0, 2, 1)]:
        chk = ranking_feasible(P, a, perm)
        assert chk.achievable
        assert tuple(rank_order(npr_pagerank(P, a, chk.witness).scores)) == perm


def test_report_json_keys():
    d = existence_check(uniform(4), tm(star()), 0.3).to_dict()
    assert {"margins", "bound", "witness", "violated_nodes", "feasible"} <= set(d)
    assert len(d["witness"]) == 4
