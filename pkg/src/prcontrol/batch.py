"""Ranking-control bound over a directory of edge lists."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .control import column_bound
from .graph import DanglingPolicy, EdgeListError, Graph, read_edge_list, \
    repair_dangling_edges, transition_matrix

SCATTER_COLUMNS = ("name", "n", "m", "max_colsum", "alpha_max")
EDGE_SUFFIXES = (".edges", ".txt")


@dataclass(frozen=True)
class BatchRecord:
    graph_name: str
    n: int
    m: int
    max_colsum: float
    alpha_max: float
    dangling_repaired: bool


def max_alpha_record(g: Graph, name: str, repair: str = "uniform",
                     seed: int = 0) -> BatchRecord:
    """Largest damping admitting ranking control for one graph.

    ``repair="uniform"`` fills dangling rows with ``e/N``; ``"edge"``
    instead adds one random arc from each dangling node to a non-dangling
    node (seeded). ``n`` and ``m`` describe the ingested graph.
    """
    dangling = g.dangling().size > 0
    if repair == "edge":
        P = transition_matrix(repair_dangling_edges(g, seed), DanglingPolicy("uniform"))
    elif repair == "uniform":
        P = transition_matrix(g, DanglingPolicy("uniform"))
    else:
        raise ValueError(f"unknown repair mode {repair!r}")
    b = column_bound(P)
    return BatchRecord(name, g.n, g.m, b["max_colsum"], b["alpha_max"], dangling)


def _one(args):
    path, repair, seed = args
    try:
        return max_alpha_record(read_edge_list(path), path.name, repair, seed), None
    except (EdgeListError, ValueError, OSError) as exc:
        return None, {"file": path.name, "error": str(exc)}


def batch_max_alpha(directory, repair: str = "uniform", seed: int = 0,
                    workers: int = 1):
    """Records for every edge list in ``directory``, sorted by file name.

    Returns ``(records, errors)``; a file that fails to parse is reported
    in ``errors`` and the batch continues.
    """
    paths = sorted(p for p in Path(directory).iterdir()
                   if p.is_file() and p.suffix in EDGE_SUFFIXES)
    jobs = [(p, repair, seed) for p in paths]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_one, jobs))
    else:
        results = [_one(j) for j in jobs]
    records = [r for r, _ in results if r is not None]
    errors = [e for _, e in results if e is not None]
    return records, errors


def records_to_dicts(records) -> list:
    return [asdict(r) for r in records]


def scatter_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCATTER_COLUMNS)
    for r in records:
        w.writerow([r.graph_name, r.n, r.m, repr(r.max_colsum), repr(r.alpha_max)])
    return buf.getvalue()
