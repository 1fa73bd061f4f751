import sys
from collections import deque
from pathlib import Path

import numpy as np
import pytest

import prcontrol
from prcontrol.generators import bidirected_pair, directed_cycle, random_strongly_connected, star
from prcontrol.graph import transition_matrix

DATA = Path(prcontrol.__file__).parent / "data"


def uniform(n):
    return np.full(n, 1.0 / n)


def tm(g, teleport=None):
    return transition_matrix(g, teleport=uniform(g.n) if teleport is None else teleport)


def perron_left(G):
    """Oracle: stationary row vector of a stochastic matrix via dense eig."""
    w, V = np.linalg.eig(G.T)
    k = np.argmin(np.abs(w - 1))
    x = np.real(V[:, k])
    return x / x.sum()


def reachable(adj, s):
    seen = {s}
    q = deque([s])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                q.append(v)
    return seen


def bfs_strongly_connected(g):
    """Oracle: every node reaches all nodes in the graph and in its reverse."""
    fwd = {i: [] for i in range(g.n)}
    rev = {i: [] for i in range(g.n)}
    for s, d, _ in g.edges:
        fwd[s].append(d)
        rev[d].append(s)
    return all(len(reachable(fwd, i)) == g.n and len(reachable(rev, i)) == g.n
               for i in range(g.n))


def bfs_scc_sizes(g):
    fwd = {i: [] for i in range(g.n)}
    rev = {i: [] for i in range(g.n)}
    for s, d, _ in g.edges:
        fwd[s].append(d)
        rev[d].append(s)
    comps, done = [], set()
    for i in range(g.n):
        if i in done:
            continue
        comp = reachable(fwd, i) & reachable(rev, i)
        done |= comp
        comps.append(len(comp))
    return tuple(sorted(comps, reverse=True))


def random_instances(count, seed, n_max=30, weighted=True):
    """(graph, alpha, v) triples on random strongly connected digraphs."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = int(rng.integers(2, n_max + 1))
        g = random_strongly_connected(n, int(rng.integers(1 << 30)),
                                      p=float(rng.uniform(0.05, 0.4)), weighted=weighted)
        yield g, float(rng.uniform(0.05, 0.95)), rng.dirichlet(np.ones(n))


@pytest.fixture
def c6():
    return directed_cycle(6)


@pytest.fixture
def star4():
    return star(3)


@pytest.fixture
def pair():
    return bidirected_pair()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, title, detail in sorted(mod.RESULTS, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}: {title} ({detail})")
