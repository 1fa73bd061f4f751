"""Directed weighted graphs, edge-list ingestion and transition matrices.

Edge lists are UTF-8 text with one arc per line, ``src dst [weight]``.
Lines starting with ``#`` are comments, except for the ``# nodes:``
pragma which declares node labels in id order (needed for isolated nodes
and for exact round trips of labelled graphs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "EdgeListError",
    "Graph",
    "DanglingPolicy",
    "TransitionMatrix",
    "Connectivity",
    "parse_edge_list",
    "read_edge_list",
    "serialize_edge_list",
    "transition_matrix",
    "is_strongly_connected",
    "repair_dangling_edges",
]

NODES_PRAGMA = "# nodes:"
ROW_SUM_TOL = 1e-12


class EdgeListError(ValueError):
    """Malformed edge-list input. ``lineno`` is 1-based, or None."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """Immutable directed multigraph with positive arc weights.

    Parallel arcs are merged at construction time by summing weights, so
    ``edges`` holds one ``(src, dst, weight)`` triple per distinct arc,
    sorted by ``(src, dst)``.
    """

    n: int
    edges: tuple = ()
    labels: Optional[tuple] = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        merged: dict = {}
        for src, dst, w in self.edges:
            src, dst, w = int(src), int(dst), float(w)
            if not (0 <= src < self.n and 0 <= dst < self.n):
                raise ValueError(f"arc ({src}, {dst}) out of range for n={self.n}")
            if not w > 0 or not np.isfinite(w):
                raise ValueError(f"arc ({src}, {dst}) has non-positive weight {w!r}")
            merged[(src, dst)] = merged.get((src, dst), 0.0) + w
        object.__setattr__(
            self, "edges", tuple((s, d, w) for (s, d), w in sorted(merged.items()))
        )
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n or len(set(labels)) != self.n:
                raise ValueError("labels must be n distinct strings")
            if labels == tuple(str(i) for i in range(self.n)):
                labels = None
            object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def node_id(self, token: Union[str, int]) -> int:
        """Resolve a label (or integer id) to a dense node id."""
        token = str(token)
        if self.labels is not None and token in self.labels:
            return self.labels.index(token)
        try:
            i = int(token)
        except ValueError:
            raise KeyError(f"unknown node {token!r}") from None
        if not 0 <= i < self.n:
            raise KeyError(f"node {i} out of range for n={self.n}")
        return i

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for s, d, w in self.edges:
            a[s, d] += w
        return a

    def out_weight(self) -> np.ndarray:
        k = np.zeros(self.n)
        for s, _, w in self.edges:
            k[s] += w
        return k

    def dangling(self) -> np.ndarray:
        """Ids of nodes with zero out-degree."""
        return np.flatnonzero(self.out_weight() == 0)

    def with_edges(self, edges: Iterable) -> "Graph":
        return Graph(self.n, tuple(edges), self.labels)

    def with_weights(self, weights: dict) -> "Graph":
        """Copy with each arc reweighted from ``weights[(src, dst)]``."""
        return self.with_edges((s, d, weights[(s, d)]) for s, d, _ in self.edges)

    def to_dict(self) -> dict:
        out = {"n": self.n, "edges": [[s, d, w] for s, d, w in self.edges]}
        out["labels"] = (
            {str(i): lab for i, lab in enumerate(self.labels)} if self.labels else {}
        )
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        n = int(data["n"])
        labels = data.get("labels") or None
        if labels:
            labels = tuple(labels[str(i)] for i in range(n))
        return cls(n, tuple(tuple(e) for e in data["edges"]), labels)


def _is_int(token: str) -> bool:
    try:
        int(token)
    except ValueError:
        return False
    return True


def parse_edge_list(
    text: Union[str, bytes], fmt: Optional[str] = None
) -> Graph:
    """Parse an edge list into a :class:`Graph`.

    Parameters
    ----------
    text : str or bytes
        Edge-list contents. Bytes are decoded as UTF-8.
    fmt : {None, "src-dst", "src-dst-weight"}
        Expected line shape. With None the shape is taken from the first
        data line and every later line must match it.

    Node tokens are densified to ids ``0..N-1``: numerically sorted when
    every token is an integer, by first appearance otherwise. A
    ``# nodes:`` pragma fixes the order explicitly.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if fmt not in (None, "src-dst", "src-dst-weight"):
        raise ValueError(f"unknown edge-list format {fmt!r}")
    ntok = {None: None, "src-dst": 2, "src-dst-weight": 3}[fmt]

    declared: list = []
    raw = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith(NODES_PRAGMA):
            declared.extend(stripped[len(NODES_PRAGMA):].split())
            continue
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) not in (2, 3):
            raise EdgeListError(f"expected 2 or 3 tokens, got {len(parts)}", lineno)
        if ntok is None:
            ntok = len(parts)
        elif len(parts) != ntok:
            raise EdgeListError(
                f"inconsistent token count: {len(parts)} where {ntok} expected", lineno
            )
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise EdgeListError(f"weight {parts[2]!r} is not a number", lineno) from None
            if not w > 0 or not np.isfinite(w):
                raise EdgeListError(f"weight must be positive, got {parts[2]}", lineno)
        raw.append((parts[0], parts[1], w))

    if len(set(declared)) != len(declared):
        raise EdgeListError("duplicate label in nodes pragma")
    seen = dict.fromkeys(declared)
    for s, d, _ in raw:
        seen.setdefault(s)
        seen.setdefault(d)
    tokens = list(seen)
    if not declared and tokens and all(_is_int(t) for t in tokens):
        if len({int(t) for t in tokens}) != len(tokens):
            raise EdgeListError("integer node tokens collide after normalization")
        tokens.sort(key=int)
    index = {t: i for i, t in enumerate(tokens)}
    edges = tuple((index[s], index[d], w) for s, d, w in raw)
    return Graph(len(tokens), edges, tuple(tokens))


def read_edge_list(path, fmt: Optional[str] = None) -> Graph:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return parse_edge_list(data, fmt)
    except EdgeListError as exc:
        raise EdgeListError(f"{path}: {exc}") from None


def serialize_edge_list(g: Graph) -> str:
    """Inverse of :func:`parse_edge_list` (weights written with ``repr``)."""
    lines = []
    isolated = set(range(g.n)) - {x for s, d, _ in g.edges for x in (s, d)}
    if g.labels is not None or isolated:
        lines.append(NODES_PRAGMA + " " + " ".join(g.label(i) for i in range(g.n)))
    unit = all(w == 1.0 for _, _, w in g.edges)
    for s, d, w in g.edges:
        if unit:
            lines.append(f"{g.label(s)} {g.label(d)}")
        else:
            lines.append(f"{g.label(s)} {g.label(d)} {w!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DanglingPolicy:
    """How rows of zero-out-degree nodes are filled.

    ``uniform`` uses ``u = e/N``; ``teleport-copy`` copies the active
    teleport distribution (row ``i`` of a personalization matrix when one
    is given); ``custom`` uses the supplied ``u``.
    """

    mode: str = "teleport-copy"
    u: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if self.mode not in ("uniform", "teleport-copy", "custom"):
            raise ValueError(f"unknown dangling mode {self.mode!r}")
        if self.mode == "custom":
            if self.u is None:
                raise ValueError("custom dangling policy needs a distribution u")
            u = np.asarray(self.u, dtype=float)
            if u.ndim != 1 or np.any(u <= 0) or abs(u.sum() - 1) > 1e-10:
                raise ValueError("custom u must be positive with unit 1-norm")
            object.__setattr__(self, "u", u)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Row-stochastic matrix with the record of any dangling-row repair."""

    entries: np.ndarray
    repaired_rows: tuple = ()
    repair_mode: Optional[str] = None

    def __post_init__(self):
        p = np.array(self.entries, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] == 0:
            raise ValueError("transition matrix must be square and non-empty")
        if np.any(p < 0) or np.max(np.abs(p.sum(axis=1) - 1)) > ROW_SUM_TOL:
            raise ValueError("transition matrix must be non-negative and row-stochastic")
        p.setflags(write=False)
        object.__setattr__(self, "entries", p)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def repaired(self) -> bool:
        return bool(self.repaired_rows)

    def column_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0)


def transition_matrix(
    g: Graph,
    policy: Optional[DanglingPolicy] = None,
    teleport: Optional[np.ndarray] = None,
) -> TransitionMatrix:
    """Row-normalize the adjacency matrix, ``p_ij = a_ij / sum_j a_ij``.

    Dangling rows are replaced according to ``policy`` (default
    ``teleport-copy``, which requires ``teleport``: a vector, or a
    row-stochastic matrix whose matching row is copied).
    """
    policy = policy or DanglingPolicy()
    if g.n == 0:
        raise ValueError("empty graph has no transition matrix")
    a = g.adjacency()
    k = a.sum(axis=1)
    dangling = np.flatnonzero(k == 0)
    p = np.zeros_like(a)
    live = k > 0
    p[live] = a[live] / k[live, None]
    if dangling.size:
        if policy.mode == "uniform":
            p[dangling] = 1.0 / g.n
        elif policy.mode == "custom":
            if policy.u.shape != (g.n,):
                raise ValueError("custom u has the wrong length")
            p[dangling] = policy.u
        else:
            if teleport is None:
                raise ValueError("teleport-copy dangling repair needs a teleport distribution")
            t = np.asarray(teleport, dtype=float)
            p[dangling] = t[dangling] if t.ndim == 2 else t
    # renormalize against rounding in a_ij / k_i
    p /= p.sum(axis=1, keepdims=True)
    return TransitionMatrix(
        p, tuple(int(i) for i in dangling), policy.mode if dangling.size else None
    )


@dataclass(frozen=True)
class Connectivity:
    strongly_connected: bool
    component_sizes: tuple
    membership: tuple

    def __bool__(self) -> bool:
        return self.strongly_connected

    def to_dict(self) -> dict:
        return {
            "strongly_connected": self.strongly_connected,
            "n_components": len(self.component_sizes),
            "component_sizes": list(self.component_sizes),
        }


def is_strongly_connected(g: Graph) -> Connectivity:
    """Strong-connectivity test with a condensation summary.

    Component sizes are listed in decreasing order.
    """
    if g.n == 0:
        return Connectivity(False, (), ())
    rows = [s for s, _, _ in g.edges]
    cols = [d for _, d, _ in g.edges]
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
    ncomp, labels = connected_components(adj, directed=True, connection="strong")
    sizes = np.bincount(labels, minlength=ncomp)
    return Connectivity(
        ncomp == 1,
        tuple(sorted((int(s) for s in sizes), reverse=True)),
        tuple(int(x) for x in labels),
    )


def repair_dangling_edges(g: Graph, seed: int) -> Graph:
    """Give each dangling node one unit arc to a random non-dangling node."""
    dangling = set(g.dangling().tolist())
    targets = [i for i in range(g.n) if i not in dangling]
    if not dangling:
        return g
    if not targets:
        raise ValueError("every node is dangling; nothing to connect to")
    rng = np.random.default_rng(seed)
    extra = [(i, int(rng.choice(targets)), 1.0) for i in sorted(dangling)]
    return g.with_edges(list(g.edges) + extra)


def from_adjacency(a: Sequence, labels: Optional[Sequence] = None) -> Graph:
    a = np.asarray(a, dtype=float)
    src, dst = np.nonzero(a)
    return Graph(a.shape[0], tuple(zip(src.tolist(), dst.tolist(), a[src, dst].tolist())),
                 tuple(labels) if labels is not None else None)
