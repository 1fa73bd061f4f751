"""Eigenvector centrality and the three PageRank variants.

All PageRank solvers take a row-stochastic :class:`TransitionMatrix` and
return a :class:`CentralityVector` (positive, unit 1-norm). The variants:

* ``pagerank``      global damping, personalization vector
* ``npr_pagerank``  per-node damping (node-dependent restart)
* ``mpr_pagerank``  global damping, personalization matrix
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .graph import Graph, TransitionMatrix, is_strongly_connected

log = logging.getLogger(__name__)

POWER_TOL = 1e-12
MAX_ITER = 100_000
DIRECT_MAX_N = 2000
# per-node dampings must stay this far below 1 for a well-posed restart chain
NPR_MARGIN = 1e-6
TIE_TOL = 1e-13


class ConvergenceError(RuntimeError):
    pass


class NotStronglyConnectedError(ValueError):
    pass


def _check_global_alpha(alpha) -> float:
    alpha = float(alpha)
    if alpha <= 0:
        raise ValueError(
            f"damping {alpha} not in (0, 1): at 0 the walker only teleports and "
            "the graph is ignored"
        )
    if alpha >= 1:
        raise ValueError(
            f"damping {alpha} not in (0, 1): at 1 the walker never teleports and "
            "the stationary vector need not be unique"
        )
    return alpha


@dataclass(frozen=True, eq=False)
class Damping:
    """One global damping or a per-node vector, all strictly inside (0, 1)."""

    values: Union[float, np.ndarray]

    def __post_init__(self):
        if np.ndim(self.values) == 0:
            object.__setattr__(self, "values", _check_global_alpha(self.values))
            return
        a = np.array(self.values, dtype=float)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("per-node damping must be a non-empty vector")
        if np.any(a <= 0):
            raise ValueError("per-node dampings must be > 0 (0 means pure teleportation)")
        if np.any(a > 1 - NPR_MARGIN):
            raise ValueError(
                f"per-node dampings must be <= 1 - {NPR_MARGIN:g} "
                "(at 1 a node never restarts)"
            )
        a.setflags(write=False)
        object.__setattr__(self, "values", a)

    @classmethod
    def coerce(cls, d) -> "Damping":
        return d if isinstance(d, Damping) else cls(d)

    @property
    def is_global(self) -> bool:
        return np.ndim(self.values) == 0

    @property
    def effective(self) -> float:
        """The global damping, or the largest per-node damping."""
        return float(self.values) if self.is_global else float(self.values.max())

    def vector(self, n: int) -> np.ndarray:
        if self.is_global:
            return np.full(n, self.values)
        if self.values.size != n:
            raise ValueError(f"damping vector has length {self.values.size}, expected {n}")
        return np.asarray(self.values)


def check_distribution(x, n: Optional[int] = None, name: str = "vector",
                       tol: float = 1e-10) -> np.ndarray:
    """Validate a strictly positive vector with unit 1-norm."""
    x = np.array(x, dtype=float)
    if x.ndim != 1 or (n is not None and x.size != n):
        raise ValueError(f"{name} must be a vector of length {n}")
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise ValueError(f"{name} must be strictly positive")
    if abs(x.sum() - 1) > tol:
        raise ValueError(f"{name} must have unit 1-norm (sum is {x.sum()!r})")
    return x


def check_teleport_matrix(m, n: int) -> np.ndarray:
    m = np.array(m, dtype=float)
    if m.shape != (n, n):
        raise ValueError(f"personalization matrix must be {n}x{n}")
    if np.any(m < 0) or np.max(np.abs(m.sum(axis=1) - 1)) > 1e-12:
        raise ValueError("personalization matrix must be row-stochastic")
    if np.any(m <= 0):
        # uniqueness of the stationary vector relies on a positive teleport part
        raise ValueError("personalization matrix rows must be strictly positive")
    return m


def rank_order(scores: np.ndarray, tie_tol: float = TIE_TOL) -> np.ndarray:
    """Node ids by decreasing score; near-equal scores ordered by id."""
    scores = np.asarray(scores, dtype=float)
    order = np.lexsort((np.arange(scores.size), -scores))
    out, group = [], []
    for i in order:
        if group and scores[group[0]] - scores[i] > tie_tol:
            out.extend(sorted(group))
            group = []
        group.append(int(i))
    out.extend(sorted(group))
    return np.array(out, dtype=int)


@dataclass(frozen=True, eq=False)
class CentralityVector:
    scores: np.ndarray
    iterations: int = 0
    residual: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.array(self.scores, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "scores", s)

    @property
    def ranking(self) -> np.ndarray:
        return rank_order(self.scores)

    @property
    def min_score(self) -> float:
        return float(self.scores.min())

    def to_dict(self) -> dict:
        meta = {"iterations": int(self.iterations), "residual": float(self.residual)}
        meta.update(self.meta)
        return {
            "scores": self.scores.tolist(),
            "ranking": self.ranking.tolist(),
            "meta": meta,
        }


def _normalized(x: np.ndarray) -> np.ndarray:
    return x / x.sum()


def eigenvector_centrality(g: Graph, tol: float = 1e-13,
                           max_iter: int = MAX_ITER) -> CentralityVector:
    """Perron vector of ``A^T`` for a strongly connected graph.

    Power iteration runs on ``A^T / s + I`` (``s`` the largest column sum
    of ``A``). The shift makes the iteration matrix primitive, so periodic
    graphs such as directed cycles converge.
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError(
            "eigenvector centrality needs a strongly connected graph "
            "(the Perron vector is otherwise not unique)"
        )
    a = g.adjacency()
    s = a.sum(axis=0).max()
    m = a.T / s + np.eye(g.n)
    x = np.full(g.n, 1.0 / g.n)
    thr = max(tol, 8 * g.n * np.finfo(float).eps)
    for it in range(1, max_iter + 1):
        y = m @ x
        growth = y.sum()
        y /= growth
        delta = np.abs(y - x).sum()
        x = y
        if delta <= thr:
            break
    else:
        raise ConvergenceError(f"eigenvector centrality: no convergence in {max_iter} iterations")
    lam = (growth - 1.0) * s
    residual = np.abs(a.T @ x - lam * x).sum()
    return CentralityVector(x, it, float(residual), {"eigenvalue": float(lam)})


def _stopping_threshold(tol: float, contraction: float, n: int) -> float:
    # a-posteriori bound: |x_k - x*| <= c/(1-c) |x_k - x_{k-1}|
    thr = tol * (1 - contraction) / max(contraction, 1e-300)
    return max(thr, 4 * n * np.finfo(float).eps)


def pagerank(P: TransitionMatrix, alpha: float, v=None, method: str = "direct",
             tol: float = POWER_TOL, max_iter: int = MAX_ITER) -> CentralityVector:
    """Standard PageRank ``pi^T = (1-alpha) v^T (I - alpha P)^{-1}``.

    Parameters
    ----------
    P : TransitionMatrix
    alpha : float
        Damping factor in (0, 1).
    v : array_like, optional
        Personalization vector (positive, unit 1-norm). Uniform if omitted.
    method : {"direct", "power"}
        ``direct`` solves ``(I - alpha P^T) pi = (1 - alpha) v`` by dense LU;
        above ``DIRECT_MAX_N`` nodes it falls back to ``power``, which
        iterates ``x <- alpha P^T x + (1 - alpha) v`` from ``x = v``.
    """
    alpha = _check_global_alpha(alpha)
    p = P.entries
    n = P.n
    v = np.full(n, 1.0 / n) if v is None else check_distribution(v, n, "personalization vector")
    if method not in ("direct", "power"):
        raise ValueError(f"unknown method {method!r}")
    if method == "direct" and n > DIRECT_MAX_N:
        log.info("n=%d above direct-solve limit, using power iteration", n)
        method = "power"

    if method == "direct":
        lhs = np.eye(n) - alpha * p.T
        try:
            pi = np.linalg.solve(lhs, (1 - alpha) * v)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                "singular PageRank system; the transition matrix is corrupt"
            ) from exc
        iterations = 0
    else:
        thr = _stopping_threshold(tol, alpha, n)
        x = v.copy()
        pt = np.ascontiguousarray(p.T)
        for iterations in range(1, max_iter + 1):
            y = alpha * (pt @ x) + (1 - alpha) * v
            delta = np.abs(y - x).sum()
            x = y
            if delta <= thr:
                break
        else:
            raise ConvergenceError(f"PageRank power iteration: no convergence in {max_iter} iterations")
        pi = x
    pi = _normalized(pi)
    res = float(np.abs(alpha * (pi @ p) + (1 - alpha) * v - pi).sum())
    return CentralityVector(pi, iterations, res, {"method": method})


def npr_kernel(P: TransitionMatrix, alphas) -> np.ndarray:
    """``(I - A P)^{-1}`` with ``A = diag(alphas)``."""
    a = Damping.coerce(alphas).vector(P.n)
    return np.linalg.inv(np.eye(P.n) - a[:, None] * P.entries)


def npr_pagerank(P: TransitionMatrix, alphas, w=None) -> CentralityVector:
    """Node-dependent restart PageRank.

    Solves ``y^T (I - A P) = w^T`` and normalizes ``pi = y / (y^T e)``.
    ``meta["gamma"]`` is ``sum_i w_i / (1 - alpha_i)``;
    ``meta["normalizer"]`` is ``w^T (I - A P)^{-1} e``, the factor that
    actually gives ``|pi|_1 = 1``. The two coincide for a global damping.
    """
    n = P.n
    a = Damping.coerce(alphas).vector(n)
    w = np.full(n, 1.0 / n) if w is None else check_distribution(w, n, "personalization vector")
    y = np.linalg.solve((np.eye(n) - a[:, None] * P.entries).T, w)
    normalizer = float(y.sum())
    pi = y / normalizer
    gamma = float(np.sum(w / (1 - a)))
    res = float(np.abs(npr_google(P, a, w).T @ pi - pi).sum())
    return CentralityVector(pi, 0, res, {"gamma": gamma, "normalizer": normalizer})


def npr_google(P: TransitionMatrix, alphas, w) -> np.ndarray:
    """``A P + (I - A) e w^T``."""
    a = Damping.coerce(alphas).vector(P.n)
    return a[:, None] * P.entries + np.outer(1 - a, w)


def dobrushin(m: np.ndarray) -> float:
    """Ergodicity coefficient ``max_{i,k} |m_i - m_k|_1 / 2`` of a stochastic matrix."""
    n = m.shape[0]
    if n < 2:
        return 0.0
    diffs = np.abs(m[:, None, :] - m[None, :, :]).sum(axis=2)
    return float(diffs.max() / 2)


def mpr_pagerank(P: TransitionMatrix, alpha: float, M, tol: float = POWER_TOL,
                 max_iter: int = MAX_ITER) -> CentralityVector:
    """PageRank with a personalization matrix ``M`` (one teleport row per node).

    No closed form exists; power iteration on ``alpha P + (1 - alpha) M``
    from the uniform vector. The stopping rule uses the contraction bound
    ``alpha + (1 - alpha) tau(M)`` with ``tau`` the Dobrushin coefficient.
    """
    alpha = _check_global_alpha(alpha)
    n = P.n
    m = check_teleport_matrix(M, n)
    gt = np.ascontiguousarray((alpha * P.entries + (1 - alpha) * m).T)
    contraction = min(alpha + (1 - alpha) * dobrushin(m), 1 - 1e-15)
    thr = _stopping_threshold(tol, contraction, n)
    x = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        y = gt @ x
        y /= y.sum()
        delta = np.abs(y - x).sum()
        x = y
        if delta <= thr:
            break
    else:
        raise ConvergenceError(f"MPR power iteration: no convergence in {max_iter} iterations")
    res = float(np.abs(gt @ x - x).sum())
    return CentralityVector(x, it, res)


def degree_dependent_damping(g: Graph, a: float, sigma: float) -> Damping:
    """Per-node dampings ``A = I - a D^sigma`` from weighted out-degrees."""
    k = g.out_weight()
    if np.any(k == 0):
        raise ValueError("degree-dependent damping undefined for dangling nodes")
    return Damping(1.0 - a * k ** sigma)
