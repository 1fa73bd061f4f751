"""Small canonical graphs and seeded synthetic digraphs for fixtures."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .graph import Graph, serialize_edge_list
from .structural import directed_cycle

__all__ = ["directed_cycle", "star", "bidirected_pair", "complete_digraph",
           "random_digraph", "random_strongly_connected", "preferential_attachment",
           "write_fixtures", "FIXTURES"]


def star(leaves: int = 3) -> Graph:
    """Hub 0 linked both ways to leaves 1..leaves."""
    arcs = [(0, i, 1.0) for i in range(1, leaves + 1)]
    arcs += [(i, 0, 1.0) for i in range(1, leaves + 1)]
    return Graph(leaves + 1, tuple(arcs))


def bidirected_pair(w01: float = 1.0, w10: float = 1.0) -> Graph:
    return Graph(2, ((0, 1, w01), (1, 0, w10)))


def complete_digraph(n: int) -> Graph:
    return Graph(n, tuple((i, j, 1.0) for i in range(n) for j in range(n) if i != j))


def random_digraph(n: int, p: float, seed: int) -> Graph:
    """Directed Erdos-Renyi graph without self-loops (may have dangling nodes)."""
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    src, dst = np.nonzero(mask)
    return Graph(n, tuple((int(s), int(d), 1.0) for s, d in zip(src, dst)))


def random_strongly_connected(n: int, seed: int, p: float = 0.2,
                              weighted: bool = False) -> Graph:
    """A random Hamiltonian cycle plus Erdos-Renyi chords."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    arcs = {(int(perm[i]), int(perm[(i + 1) % n])) for i in range(n)} if n > 1 else set()
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    arcs |= {(int(s), int(d)) for s, d in zip(*np.nonzero(mask))}
    arcs = sorted(arcs)
    weights = rng.uniform(0.1, 10.0, len(arcs)) if weighted else np.ones(len(arcs))
    return Graph(n, tuple((s, d, float(w)) for (s, d), w in zip(arcs, weights)))


def preferential_attachment(n: int, seed: int, max_out: int = 2) -> Graph:
    """Growing digraph: each new node links to 1..max_out earlier nodes.

    Targets are chosen with probability proportional to in-degree + 1.
    Nodes 0, 1, 2 start as a directed 3-cycle, so every node has
    out-degree at least 1.
    """
    rng = np.random.default_rng(seed)
    arcs = [(0, 1), (1, 2), (2, 0)]
    indeg = np.zeros(n)
    indeg[:3] = 1
    for i in range(3, n):
        k = int(rng.integers(1, max_out + 1))
        weights = indeg[:i] + 1
        targets = rng.choice(i, size=min(k, i), replace=False, p=weights / weights.sum())
        for t in sorted(int(x) for x in targets):
            arcs.append((i, t))
            indeg[t] += 1
    return Graph(n, tuple((s, d, 1.0) for s, d in arcs))


# name -> (generator, kwargs); seeds are recorded here and in the manifest
FIXTURES = {
    "suite/c6.edges": (directed_cycle, {"n": 6}),
    "suite/star.edges": (star, {"leaves": 3}),
    "suite/rand_a.edges": (random_strongly_connected, {"n": 12, "seed": 101, "p": 0.2}),
    "suite/rand_b.edges": (random_strongly_connected, {"n": 30, "seed": 202, "p": 0.1}),
    "suite/rand_c.edges": (random_digraph, {"n": 50, "p": 0.06, "seed": 303}),
    "pa200.edges": (preferential_attachment, {"n": 200, "seed": 2024}),
}


def write_fixtures(root) -> None:
    """Regenerate the bundled edge lists and their manifest under ``root``."""
    root = Path(root)
    manifest = {}
    for name, (fn, kwargs) in FIXTURES.items():
        path = root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_edge_list(fn(**kwargs)), encoding="utf-8")
        manifest[name] = {"generator": fn.__name__, **kwargs}
    (root / "fixtures.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    write_fixtures(Path(__file__).parent / "data")
