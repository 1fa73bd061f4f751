"""Structural control: edge reweighting, cycle invariance and self-loop sweeps."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import DanglingPolicy, Graph, is_strongly_connected, transition_matrix
from .solvers import (
    CentralityVector,
    NotStronglyConnectedError,
    check_distribution,
    eigenvector_centrality,
    pagerank,
)

DEFAULT_SWEEP_WEIGHTS = (1.0, 10.0, 100.0, 1000.0)
DEFAULT_SWEEP_ALPHAS = (0.5, 0.85, 0.9, 0.99)


@dataclass(frozen=True, eq=False)
class WeightAssignment:
    graph: Graph
    weights: dict
    target: np.ndarray
    construction_residual: float
    achieved: Optional[CentralityVector] = None

    @property
    def achieved_eigenvalue(self) -> Optional[float]:
        return None if self.achieved is None else self.achieved.meta["eigenvalue"]

    @property
    def deviation(self) -> Optional[float]:
        if self.achieved is None:
            return None
        return float(np.abs(self.achieved.scores - self.target).sum())

    def to_dict(self) -> dict:
        g = self.graph
        return {
            "weights": [[g.label(s), g.label(d), w] for (s, d), w in sorted(self.weights.items())],
            "target": self.target.tolist(),
            "achieved_eigenvalue": self.achieved_eigenvalue,
            "construction_residual": self.construction_residual,
            "deviation": self.deviation,
        }


def tune_weights_for_eigenvector(g: Graph, c, verify: bool = True) -> WeightAssignment:
    """Reweight arcs so the eigenvector centrality becomes ``c``.

    Each arc ``j -> i`` gets ``c_i / (c_j |S_i|)`` where ``S_i`` is the
    in-neighbourhood of ``i``. Then ``(A^T c)_i = c_i`` for every node,
    so ``c`` is the Perron vector with eigenvalue 1.
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError("weight tuning needs a strongly connected graph")
    c = np.asarray(c, dtype=float)
    if c.shape != (g.n,) or np.any(c <= 0):
        raise ValueError("target must be a positive vector with one entry per node")
    c = c / c.sum()
    indeg = np.zeros(g.n, dtype=int)
    for _, d, _ in g.edges:
        indeg[d] += 1
    if np.any(indeg == 0):
        raise ValueError(f"node {int(np.argmin(indeg))} has no in-neighbours")
    weights = {(s, d): c[d] / (c[s] * indeg[d]) for s, d, _ in g.edges}
    tuned = g.with_weights(weights)
    residual = float(np.abs(tuned.adjacency().T @ c - c).max())
    achieved = eigenvector_centrality(tuned) if verify else None
    return WeightAssignment(tuned, weights, c, residual, achieved)


def directed_cycle(n: int, weights: Optional[Sequence[float]] = None) -> Graph:
    weights = [1.0] * n if weights is None else list(weights)
    if len(weights) != n:
        raise ValueError(f"need {n} cycle weights, got {len(weights)}")
    return Graph(n, tuple((i, (i + 1) % n, w) for i, w in enumerate(weights)))


@dataclass(frozen=True, eq=False)
class CycleDemo:
    before: np.ndarray
    after: np.ndarray

    @property
    def max_delta(self) -> float:
        return float(np.abs(self.after - self.before).max())

    def to_dict(self) -> dict:
        return {"pagerank_before": self.before.tolist(),
                "pagerank_after": self.after.tolist(),
                "max_delta": self.max_delta}


def cycle_invariance_demo(n: int, weights: Sequence[float], alpha: float = 0.85,
                          v=None) -> CycleDemo:
    """PageRank of the directed cycle before and after reweighting its arcs.

    Every node has out-degree one, so row normalization maps any positive
    weight back to 1 and the two vectors coincide.
    """
    if n < 2:
        raise ValueError("cycle needs at least 2 nodes")
    if any(not w > 0 for w in weights):
        raise ValueError("cycle weights must be positive")
    v = np.full(n, 1.0 / n) if v is None else check_distribution(v, n)
    before = pagerank(transition_matrix(directed_cycle(n), teleport=v), alpha, v).scores
    after = pagerank(transition_matrix(directed_cycle(n, weights), teleport=v), alpha, v).scores
    return CycleDemo(before, after)


def add_self_loop(g: Graph, node: int, w: float) -> Graph:
    if not w > 0:
        raise ValueError("self-loop weight must be positive")
    return g.with_edges(list(g.edges) + [(node, node, w)])


@dataclass(frozen=True)
class SelfLoopSweep:
    node: int
    weights: tuple
    alphas: tuple
    rows: tuple  # (w, alpha, score, rank, bound_satisfied)

    @property
    def top_rank_region(self) -> list:
        return [(w, a) for w, a, _, rank, _ in self.rows if rank == 1]

    def monotone_in_weight(self) -> dict:
        """Per alpha, whether the node's score is non-decreasing in ``w``.

        Only grid points meeting ``alpha >= 1 - 1/w`` are compared. This is
        an observation about the grid, not a proven property.
        """
        out = {}
        for a in self.alphas:
            pts = sorted((w, s) for w, al, s, _, ok in self.rows if al == a and ok)
            scores = [s for _, s in pts]
            out[a] = all(y >= x - 1e-15 for x, y in zip(scores, scores[1:]))
        return out

    def to_dict(self) -> dict:
        return {
            "node": self.node,
            "rows": [dict(zip(SWEEP_COLUMNS, r)) for r in self.rows],
            "top_rank_region": [list(p) for p in self.top_rank_region],
            "necessary_bound": [[w, 1 - 1 / w] for w in self.weights],
            "monotone_in_weight": {repr(k): v for k, v in self.monotone_in_weight().items()},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(SWEEP_COLUMNS)
        for w, a, s, r, ok in self.rows:
            wr.writerow([repr(w), repr(a), repr(s), r, str(ok).lower()])
        return buf.getvalue()


SWEEP_COLUMNS = ("w", "alpha", "score_of_node", "rank_of_node", "bound_satisfied")


def selfloop_sweep(g: Graph, node: int, weights: Sequence[float] = DEFAULT_SWEEP_WEIGHTS,
                   alphas: Sequence[float] = DEFAULT_SWEEP_ALPHAS, v=None,
                   policy: Optional[DanglingPolicy] = None) -> SelfLoopSweep:
    """PageRank of ``node`` after adding a self-loop of weight ``w``, over a grid.

    ``rank_of_node`` is 1-based. ``bound_satisfied`` marks the curve
    ``alpha >= 1 - 1/w``. It is reported, not enforced: the node can rank
    first below it (a leaf of the 4-node star does at w=1000, alpha=0.99).
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError("self-loop sweep needs a strongly connected graph")
    if not 0 <= node < g.n:
        raise ValueError(f"node {node} out of range")
    v = np.full(g.n, 1.0 / g.n) if v is None else check_distribution(v, g.n)
    rows = []
    for w in weights:
        P = transition_matrix(add_self_loop(g, node, w), policy, teleport=v)
        for a in alphas:
            pi = pagerank(P, a, v)
            rank = int(np.flatnonzero(pi.ranking == node)[0]) + 1
            rows.append((float(w), float(a), float(pi.scores[node]), rank,
                         bool(a >= 1 - 1 / w)))
    return SelfLoopSweep(node, tuple(float(w) for w in weights),
                         tuple(float(a) for a in alphas), tuple(rows))
