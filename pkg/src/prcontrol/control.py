"""Parametric control: which centralities and rankings a personalization can produce.

A target ``pi0`` is produced by some positive personalization iff every
node's margin ``pi0_j - sum_i alpha_i pi0_i P_ij`` is positive. With a
global damping that is ``pi0_j > alpha (pi0^T P)_j``. With per-node
dampings the same test at ``max_i alpha_i`` (``bound_margins``) is
sufficient but not necessary, so feasibility is decided on the exact
margins and the bound form is reported alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graph import TransitionMatrix
from .solvers import (
    Damping,
    check_distribution,
    check_teleport_matrix,
    mpr_pagerank,
    npr_kernel,
    npr_pagerank,
    pagerank,
    rank_order,
)

BOUNDARY_TOL = 1e-12


class InfeasibleTargetError(ValueError):
    def __init__(self, report: "ControlReport"):
        self.report = report
        nodes = ", ".join(f"{j} ({m:.3g})" for j, m in report.violated_nodes)
        super().__init__(f"target not realizable; non-positive margins at nodes {nodes}")


def check_target(pi0, n: int) -> np.ndarray:
    return check_distribution(pi0, n, "target centrality", tol=1e-12)


def _classify(margins: np.ndarray, tol: float = BOUNDARY_TOL) -> str:
    if np.all(margins > tol):
        return "feasible"
    if np.any(margins < -tol):
        return "infeasible"
    return "boundary"


def column_bound(P: TransitionMatrix) -> dict:
    max_colsum = float(P.column_sums().max())
    return {"max_colsum": max_colsum, "alpha_max": 1.0 / max_colsum}


@dataclass(frozen=True, eq=False)
class ControlReport:
    """Outcome of an existence test.

    ``margins`` decide feasibility; ``bound_margins`` use the effective
    (largest) damping and equal ``margins`` for a global damping.
    """

    status: str
    margins: np.ndarray
    bound_margins: np.ndarray
    witness: Optional[np.ndarray]
    bound: dict

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    @property
    def violated_nodes(self) -> list:
        return [(int(j), float(m)) for j, m in enumerate(self.margins) if m <= BOUNDARY_TOL]

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "feasible": self.feasible,
            "margins": self.margins.tolist(),
            "bound_margins": self.bound_margins.tolist(),
            "violated_nodes": [{"node": j, "margin": m} for j, m in self.violated_nodes],
            "bound": self.bound,
            "witness": None if self.witness is None else self.witness.tolist(),
        }


def exact_margins(pi0: np.ndarray, P: TransitionMatrix, damping: Damping) -> np.ndarray:
    if damping.is_global:
        return pi0 - damping.values * (pi0 @ P.entries)
    a = damping.vector(P.n)
    return pi0 - (a * pi0) @ P.entries


def existence_check(pi0, P: TransitionMatrix, damping) -> ControlReport:
    """Test whether ``pi0`` is the centrality for some positive personalization.

    Works for a global damping (standard PageRank) and for per-node
    dampings (node-dependent restart). The witness is the personalization
    vector obtained by inversion, present only when feasible.
    """
    d = Damping.coerce(damping)
    pi0 = check_target(pi0, P.n)
    margins = exact_margins(pi0, P, d)
    bound_margins = pi0 - d.effective * (pi0 @ P.entries)
    status = _classify(margins)
    bound = column_bound(P)
    bound["effective_alpha"] = d.effective
    witness = None
    if status == "feasible":
        witness = margins / float(pi0 @ (1 - d.vector(P.n)))
    return ControlReport(status, margins, bound_margins, witness, bound)


def invert_personalization(pi0, P: TransitionMatrix, alpha: float) -> np.ndarray:
    """Personalization ``v^T = pi0^T (I - alpha P) / (1 - alpha)`` producing ``pi0``."""
    d = Damping.coerce(alpha)
    if not d.is_global:
        raise ValueError("invert_personalization takes a global damping; "
                         "use invert_personalization_npr")
    rep = existence_check(pi0, P, d)
    if not rep.feasible:
        raise InfeasibleTargetError(rep)
    return rep.witness


def invert_personalization_npr(pi0, P: TransitionMatrix, alphas) -> np.ndarray:
    """``w^T = pi0^T (I - A P) / (pi0^T (I - A) e)`` for per-node dampings."""
    d = Damping.coerce(alphas)
    rep = existence_check(pi0, P, d)
    if not rep.feasible:
        raise InfeasibleTargetError(rep)
    return rep.witness


@dataclass(frozen=True)
class RankingBound:
    max_colsum: float
    alpha_max: float
    effective_alpha: float
    status: str
    weighted_max_colsum: float

    @property
    def controllable(self) -> bool:
        return self.status == "controllable"

    @property
    def center_feasible(self) -> bool:
        """Uniform target realizable, i.e. ``max_j sum_i alpha_i P_ij < 1``."""
        return self.weighted_max_colsum < 1 - BOUNDARY_TOL

    def to_dict(self) -> dict:
        return {
            "max_colsum": self.max_colsum,
            "alpha_max": self.alpha_max,
            "effective_alpha": self.effective_alpha,
            "controllable": self.controllable,
            "status": self.status,
            "weighted_max_colsum": self.weighted_max_colsum,
            "center_feasible": self.center_feasible,
        }


def ranking_bound(P: TransitionMatrix, damping) -> RankingBound:
    """Ranking-control bound ``effective_alpha * max_j sum_i P_ij < 1``.

    ``status`` is ``boundary`` when the product is within 1e-12 of 1.
    For per-node dampings the bound is sufficient; ``center_feasible``
    is the exact condition.
    """
    d = Damping.coerce(damping)
    b = column_bound(P)
    eff = d.effective
    prod = eff * b["max_colsum"]
    if abs(prod - 1) <= BOUNDARY_TOL:
        status = "boundary"
    else:
        status = "controllable" if prod < 1 else "not-controllable"
    weighted = float((d.vector(P.n) @ P.entries).max())
    return RankingBound(b["max_colsum"], b["alpha_max"], eff, status, weighted)


@dataclass(frozen=True, eq=False)
class Realization:
    feasible: bool
    margins: np.ndarray
    v: Optional[np.ndarray]
    npr: np.ndarray
    residual: Optional[float]

    @property
    def violated_nodes(self) -> list:
        return [(int(j), float(m)) for j, m in enumerate(self.margins) if m <= BOUNDARY_TOL]

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "margins": self.margins.tolist(),
            "violated_nodes": [{"node": j, "margin": m} for j, m in self.violated_nodes],
            "v": None if self.v is None else self.v.tolist(),
            "npr_scores": self.npr.tolist(),
            "residual": self.residual,
        }


def realize_npr_as_pr(P: TransitionMatrix, alphas, w, alpha: float) -> Realization:
    """Find ``v`` with ``pagerank(P, alpha, v) == npr_pagerank(P, alphas, w)``.

    Feasible iff ``w_A e_i > alpha w_A P e_i`` for all ``i``, where
    ``w_A^T = w^T (I - A P)^{-1}``. Then
    ``v^T = w_A^T (I - alpha P) / (normalizer (1 - alpha))``.
    """
    alpha = Damping(alpha).effective
    d = Damping.coerce(alphas)
    w = check_distribution(w, P.n, "personalization vector")
    w_a = w @ npr_kernel(P, d)
    margins = w_a - alpha * (w_a @ P.entries)
    npr = w_a / w_a.sum()
    if _classify(margins) != "feasible":
        return Realization(False, margins, None, npr, None)
    v = margins / (w_a.sum() * (1 - alpha))
    v = v / v.sum()
    residual = float(np.abs(pagerank(P, alpha, v).scores - npr).sum())
    return Realization(True, margins, v, npr, residual)


@dataclass(frozen=True, eq=False)
class MPRReduction:
    v: np.ndarray
    pi: np.ndarray
    identity_residual: float

    def to_dict(self) -> dict:
        return {"v": self.v.tolist(), "mpr_scores": self.pi.tolist(),
                "identity_residual": self.identity_residual}


def mpr_reduce(P: TransitionMatrix, alpha: float, M) -> MPRReduction:
    """Replace a personalization matrix by the vector ``v^T = pi^T M``.

    ``pi`` is the matrix-personalized centrality; the residual is the
    1-norm gap between ``pagerank(P, alpha, v)`` and ``pi``.
    """
    m = check_teleport_matrix(M, P.n)
    pi = mpr_pagerank(P, alpha, m).scores
    v = pi @ m
    v = v / v.sum()
    residual = float(np.abs(pagerank(P, alpha, v).scores - pi).sum())
    return MPRReduction(v, pi, residual)


@dataclass(frozen=True, eq=False)
class RankingCheck:
    achievable: bool
    ranking: tuple
    method: str
    center: ControlReport
    target: Optional[np.ndarray] = None
    witness: Optional[np.ndarray] = None
    lp_value: Optional[float] = None
    realized: Optional[tuple] = field(default=None)

    def to_dict(self) -> dict:
        return {
            "achievable": self.achievable,
            "ranking": list(self.ranking),
            "method": self.method,
            "center_status": self.center.status,
            "center_margins": self.center.margins.tolist(),
            "target": None if self.target is None else self.target.tolist(),
            "witness_v": None if self.witness is None else self.witness.tolist(),
            "lp_value": self.lp_value,
            "realized_ranking": None if self.realized is None else list(self.realized),
        }


def _forward(P: TransitionMatrix, d: Damping, v: np.ndarray) -> np.ndarray:
    if d.is_global:
        return pagerank(P, d.values, v).scores
    return npr_pagerank(P, d, v).scores


def _lp_ranking_target(P: TransitionMatrix, d: Damping, ranking: Sequence[int]):
    """Maximize the smallest slack over margins, order gaps and positivity."""
    from scipy.optimize import linprog

    n = P.n
    a = d.vector(n)
    # margin_j = pi_j - sum_i a_i pi_i P_ij  = (I - diag(a) P)^T pi
    marg = np.eye(n) - (a[:, None] * P.entries).T
    rows = [-marg]
    for hi, lo in zip(ranking[:-1], ranking[1:]):
        r = np.zeros(n)
        r[hi], r[lo] = -1.0, 1.0
        rows.append(r[None, :])
    rows.append(-np.eye(n))
    a_ub = np.vstack(rows)
    a_ub = np.hstack([a_ub, np.ones((a_ub.shape[0], 1))])
    b_ub = np.zeros(a_ub.shape[0])
    a_eq = np.hstack([np.ones((1, n)), np.zeros((1, 1))])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
                  bounds=[(0, 1)] * n + [(None, 1)], method="highs")
    if res.status != 0:
        raise RuntimeError(f"ranking LP failed: {res.message}")
    return res.x[:n], float(res.x[-1])


def ranking_feasible(P: TransitionMatrix, damping, ranking: Sequence[int]) -> RankingCheck:
    """Decide whether ``ranking`` (node ids, best first) is realizable.

    First tries a target near the simplex center, ``pi0 = e/N + delta *
    offsets``; this succeeds for every ranking exactly when the uniform
    target is feasible. If the center is infeasible the ranking is
    decided by a linear program maximizing the smallest slack.
    """
    d = Damping.coerce(damping)
    n = P.n
    ranking = tuple(int(r) for r in ranking)
    if sorted(ranking) != list(range(n)):
        raise ValueError(f"ranking must be a permutation of 0..{n - 1}")
    u = np.full(n, 1.0 / n)
    center = existence_check(u, P, d)

    if center.feasible:
        offsets = np.empty(n)
        offsets[list(ranking)] = (n - 1) / 2.0 - np.arange(n)
        # margins are linear in the target; bound their change by delta * sens
        sens = np.abs(exact_margins(offsets, P, d)).max()
        delta = 1.0 / (2 * n * n)
        if sens > 0:
            delta = min(delta, center.margins.min() / (2 * sens))
        target = u + delta * offsets
        target = target / target.sum()
        method, lp_value = "center", None
    else:
        target, lp_value = _lp_ranking_target(P, d, ranking)
        method = "lp"
        if lp_value <= BOUNDARY_TOL:
            return RankingCheck(False, ranking, method, center, lp_value=lp_value)
        target = np.clip(target, 0, None)
        target = target / target.sum()

    rep = existence_check(target, P, d)
    if not rep.feasible:
        return RankingCheck(False, ranking, method, center, target, lp_value=lp_value)
    realized = tuple(int(i) for i in rank_order(_forward(P, d, rep.witness)))
    return RankingCheck(realized == ranking, ranking, method, center, target,
                        rep.witness, lp_value, realized)
