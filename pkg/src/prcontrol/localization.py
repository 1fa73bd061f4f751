"""Attainable-score intervals over all personalization vectors.

For a fixed damping, ``pi^T = v^T X`` is linear in ``v`` (standard
PageRank, ``X = (1 - alpha)(I - alpha P)^{-1}``), so node ``i`` can reach
exactly the open interval ``(min_j x_ji, x_ii)``.

With per-node damping the centrality is ``w^T K / (w^T K e)`` with
``K = (I - A P)^{-1}``; the normalizer depends on ``w``. Three interval
families are reported for that case:

``algebraic``
    ``(min_j x_ji, x_ii)`` on ``X = K / (w_ref^T K e)``, one fixed scale.
``exact``
    endpoints from the row-normalized kernel ``diag(K e)^{-1} K``. Row
    ``j`` is the centrality for ``w = e_j``, and a ratio of linear forms
    takes its extremes at simplex vertices.
``sampled``
    min/max over random ``w`` drawn from the flat Dirichlet distribution.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import TransitionMatrix
from .solvers import Damping, check_distribution, npr_kernel

CAVEATS = (
    "Overlapping intervals are a necessary condition for two nodes to swap "
    "order; overlap alone does not prove a swap is realizable.",
    "Interval endpoints are open: they are approached but never attained by "
    "strictly positive personalization vectors.",
)
NPR_CAVEAT = (
    "Per-node damping: the normalization depends on the personalization "
    "vector. 'intervals' use one reference scale; 'exact_intervals' are the "
    "attainable normalized ranges."
)


@dataclass(frozen=True, eq=False)
class LocalizationMatrix:
    X: np.ndarray
    variant: str
    damping: Damping
    kernel: Optional[np.ndarray] = None
    reference: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def row_normalized(self) -> np.ndarray:
        """Kernel rows scaled to unit sum: row ``j`` is the centrality for ``e_j``."""
        k = self.X if self.kernel is None else self.kernel
        return k / k.sum(axis=1, keepdims=True)

    def column_dominant(self) -> bool:
        """Every column attains its strict maximum on the diagonal."""
        x = self.X
        off = np.where(np.eye(self.n, dtype=bool), -np.inf, x)
        return bool(np.all(off.max(axis=0) < np.diag(x)))


def localization_matrix(P: TransitionMatrix, damping, reference=None) -> LocalizationMatrix:
    """Build the localization kernel.

    For a per-node damping, ``reference`` is the personalization vector
    fixing the scale of ``X`` (uniform by default), chosen so that
    ``reference^T X`` is the normalized centrality for that vector.
    """
    d = Damping.coerce(damping)
    n = P.n
    if d.is_global:
        a = d.values
        x = (1 - a) * np.linalg.inv(np.eye(n) - a * P.entries)
        return LocalizationMatrix(x, "standard", d)
    kernel = npr_kernel(P, d)
    w = np.full(n, 1.0 / n) if reference is None else check_distribution(reference, n, "reference")
    x = kernel / float(w @ kernel.sum(axis=1))
    return LocalizationMatrix(x, "npr", d, kernel, w)


def _intervals_from(x: np.ndarray) -> list:
    lo_rows = x.argmin(axis=0)
    return [
        {"node": i, "lo": float(x[lo_rows[i], i]), "hi": float(x[i, i]),
         "argmin_row": int(lo_rows[i])}
        for i in range(x.shape[0])
    ]


def sampled_intervals(loc: LocalizationMatrix, samples: int = 10_000,
                      seed: int = 0) -> tuple:
    """Empirical (lo, hi) per node over Dirichlet-sampled personalizations."""
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(loc.n), size=samples)
    k = loc.X if loc.kernel is None else loc.kernel
    pis = w @ k
    pis /= pis.sum(axis=1, keepdims=True)
    return pis.min(axis=0), pis.max(axis=0)


def overlapping(a: dict, b: dict) -> bool:
    return a["lo"] < b["hi"] and b["lo"] < a["hi"]


@dataclass(frozen=True, eq=False)
class LocalizationReport:
    intervals: list
    variant: str
    exact_intervals: Optional[list] = None
    sampled: Optional[list] = None
    caveats: tuple = field(default=CAVEATS)

    @property
    def lo(self) -> np.ndarray:
        return np.array([iv["lo"] for iv in self.intervals])

    @property
    def hi(self) -> np.ndarray:
        return np.array([iv["hi"] for iv in self.intervals])

    def attainable(self) -> list:
        """Intervals that bound actual normalized centralities."""
        return self.exact_intervals if self.exact_intervals is not None else self.intervals

    def contains(self, pi, slack: float = 1e-12) -> bool:
        ivs = self.attainable()
        pi = np.asarray(pi)
        return all(iv["lo"] - slack < p < iv["hi"] + slack for iv, p in zip(ivs, pi))

    @property
    def overlap_graph(self) -> list:
        ivs = self.attainable()
        n = len(ivs)
        return [[i, j] for i in range(n) for j in range(i + 1, n)
                if overlapping(ivs[i], ivs[j])]

    def to_dict(self) -> dict:
        out = {
            "variant": self.variant,
            "intervals": self.intervals,
            "competitors": self.overlap_graph,
            "caveats": list(self.caveats),
        }
        if self.exact_intervals is not None:
            out["exact_intervals"] = self.exact_intervals
            out["sampled_intervals"] = self.sampled
            out["discrepancy"] = max(
                max(abs(a["lo"] - b["lo"]), abs(a["hi"] - b["hi"]))
                for a, b in zip(self.intervals, self.exact_intervals)
            )
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["node", "lo", "hi", "argmin_row"]
        if self.exact_intervals is not None:
            cols += ["exact_lo", "exact_hi", "sampled_lo", "sampled_hi"]
        w.writerow(cols)
        for k, iv in enumerate(self.intervals):
            row = [iv["node"], repr(iv["lo"]), repr(iv["hi"]), iv["argmin_row"]]
            if self.exact_intervals is not None:
                ex, sm = self.exact_intervals[k], self.sampled[k]
                row += [repr(ex["lo"]), repr(ex["hi"]), repr(sm["lo"]), repr(sm["hi"])]
            w.writerow(row)
        return buf.getvalue()


def localization_intervals(loc: LocalizationMatrix, samples: int = 10_000,
                           seed: int = 0) -> LocalizationReport:
    """Per-node open intervals ``(min_j x_ji, x_ii)``.

    For the per-node damping variant the exact normalized intervals and
    ``samples`` Dirichlet draws are added (see module docstring).
    """
    intervals = _intervals_from(loc.X)
    if loc.variant == "standard":
        return LocalizationReport(intervals, "standard")
    exact = _intervals_from(loc.row_normalized())
    lo, hi = sampled_intervals(loc, samples, seed)
    sampled = [{"node": i, "lo": float(lo[i]), "hi": float(hi[i])} for i in range(loc.n)]
    return LocalizationReport(intervals, "npr", exact, sampled, CAVEATS + (NPR_CAVEAT,))


@dataclass(frozen=True)
class CompetitorReport:
    competitors: list
    unbeatable: list
    leaders: list
    caveats: tuple = CAVEATS

    def to_dict(self) -> dict:
        return {
            "competitors": self.competitors,
            "unbeatable": self.unbeatable,
            "leader_candidates": self.leaders,
            "caveats": list(self.caveats),
        }


def competitor_report(report: LocalizationReport) -> CompetitorReport:
    """Overlap pairs, dominance pairs and leader candidates.

    ``unbeatable`` lists ``[i, j]`` when ``lo_i >= hi_j`` (no
    personalization lets ``j`` overtake ``i``). A leader candidate has the
    strictly largest upper endpoint; that is necessary for reaching the
    top score, not sufficient.
    """
    ivs = report.attainable()
    n = len(ivs)
    unbeatable = [[i, j] for i in range(n) for j in range(n)
                  if i != j and ivs[i]["lo"] >= ivs[j]["hi"]]
    his = [iv["hi"] for iv in ivs]
    leaders = [i for i in range(n) if all(his[i] > his[j] for j in range(n) if j != i)]
    return CompetitorReport(report.overlap_graph, unbeatable, leaders, report.caveats)
