"""Discrete-time random-walker simulation for all three teleport rules.

At node ``i`` the walker follows an arc of ``P`` with probability
``alpha_i``; otherwise it teleports according to the personalization
vector, or row ``i`` of a personalization matrix. Every state after the
burn-in is counted, teleport landings included.

Randomness comes from the counter-based SplitMix64 stream in
:mod:`prcontrol.walker.rng`, so a (inputs, seed) pair gives the same
histogram on every platform and in both kernels. The compiled kernel is
used when it was built; set ``PRCONTROL_PURE_PYTHON=1`` to force the
pure-Python one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ..graph import TransitionMatrix
from ..solvers import (
    Damping,
    check_distribution,
    check_teleport_matrix,
    mpr_pagerank,
    npr_pagerank,
    pagerank,
)
from . import _pykernel

try:
    if os.environ.get("PRCONTROL_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernel as _ckernel
except ImportError:
    _ckernel = None

BACKEND = "compiled" if _ckernel is not None else "python"
KERNELS = {"python": _pykernel.walk}
if _ckernel is not None:
    KERNELS["compiled"] = _ckernel.walk

__all__ = ["BACKEND", "WalkConfig", "VisitHistogram", "simulate", "simulate_chains",
           "convergence_curve", "reference_centrality", "tv_distance"]


def tv_distance(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p, float) - np.asarray(q, float)).sum())


@dataclass(frozen=True)
class WalkConfig:
    """``burn_in=None`` means 1% of ``steps``; ``start=None`` draws the start
    node from the teleport distribution (uniform for a matrix)."""

    steps: int
    seed: int = 0
    burn_in: Optional[int] = None
    start: Optional[int] = None

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be positive")
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", self.steps // 100)
        if not 0 <= self.burn_in < self.steps:
            raise ValueError("burn_in must satisfy 0 <= burn_in < steps")


@dataclass(frozen=True, eq=False)
class VisitHistogram:
    counts: np.ndarray
    seed: Union[int, tuple]
    tv: Optional[float] = None

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.counts.sum()

    def to_dict(self) -> dict:
        return {
            "counts": self.counts.tolist(),
            "frequencies": self.frequencies.tolist(),
            "tv": self.tv,
            "seed": list(self.seed) if isinstance(self.seed, tuple) else self.seed,
        }


def _cumulative(rows: np.ndarray) -> np.ndarray:
    c = np.cumsum(rows, axis=1)
    # pin the top of each row to exactly 1 from its last positive entry on
    last = rows.shape[1] - 1 - np.argmax(rows[:, ::-1] > 0, axis=1)
    for i, j in enumerate(last):
        c[i, j:] = 1.0
    return np.ascontiguousarray(c)


def _teleport_rows(teleport, n: int) -> np.ndarray:
    t = np.asarray(teleport, dtype=float)
    if t.ndim == 1:
        return np.tile(check_distribution(t, n, "personalization vector"), (n, 1))
    return check_teleport_matrix(t, n)


def reference_centrality(P: TransitionMatrix, damping, teleport) -> np.ndarray:
    """Algebraic stationary vector for the same (damping, teleport) pair."""
    d = Damping.coerce(damping)
    t = np.asarray(teleport, dtype=float)
    if t.ndim == 2:
        if not d.is_global:
            raise ValueError("per-node damping with a personalization matrix is not supported")
        return mpr_pagerank(P, d.values, t).scores
    if d.is_global:
        return pagerank(P, d.values, t).scores
    return npr_pagerank(P, d, t).scores


def simulate(P: TransitionMatrix, damping, teleport, cfg: WalkConfig,
             reference=None, backend: Optional[str] = None) -> VisitHistogram:
    """Simulate one walker and histogram its visits.

    Parameters
    ----------
    P : TransitionMatrix
    damping : float, array or Damping
    teleport : (N,) or (N, N) array
        Personalization vector or row-stochastic personalization matrix.
    cfg : WalkConfig
    reference : array, optional
        Vector to report the total-variation distance against.
    backend : {"compiled", "python"}, optional
    """
    n = P.n
    d = Damping.coerce(damping)
    t_rows = _teleport_rows(teleport, n)
    start_cdf = np.asarray(teleport, float) if np.ndim(teleport) == 1 else np.full(n, 1.0 / n)
    start = -1 if cfg.start is None else int(cfg.start)
    if not -1 <= start < n:
        raise ValueError(f"start node {start} out of range")
    kernel = KERNELS[backend or BACKEND]
    counts = kernel(
        _cumulative(P.entries), _cumulative(t_rows),
        np.ascontiguousarray(d.vector(n), dtype=float),
        np.ascontiguousarray(_cumulative(start_cdf[None, :])[0]),
        start, int(cfg.seed), int(cfg.steps), int(cfg.burn_in),
    )
    counts = np.asarray(counts, dtype=np.int64)
    tv = None if reference is None else tv_distance(counts / counts.sum(), reference)
    return VisitHistogram(counts, int(cfg.seed), tv)


def simulate_chains(P: TransitionMatrix, damping, teleport, cfg: WalkConfig,
                    seeds: Sequence[int], reference=None,
                    backend: Optional[str] = None) -> VisitHistogram:
    """Independent chains with distinct seeds, merged by summing counts."""
    total = np.zeros(P.n, dtype=np.int64)
    for s in seeds:
        c = WalkConfig(cfg.steps, s, cfg.burn_in, cfg.start)
        total += simulate(P, damping, teleport, c, backend=backend).counts
    tv = None if reference is None else tv_distance(total / total.sum(), reference)
    return VisitHistogram(total, tuple(int(s) for s in seeds), tv)


def convergence_curve(P: TransitionMatrix, damping, teleport, cfg: WalkConfig,
                      checkpoints: Sequence[int], reference=None,
                      backend: Optional[str] = None) -> list:
    """``(steps, tv)`` for runs truncated at each checkpoint.

    The draw stream is counter based, so a shorter run is a prefix of a
    longer one with the same seed. Burn-in is taken from ``cfg`` and
    clipped below each checkpoint.
    """
    if reference is None:
        reference = reference_centrality(P, damping, teleport)
    out = []
    for k in checkpoints:
        c = WalkConfig(int(k), cfg.seed, min(cfg.burn_in, int(k) - 1), cfg.start)
        h = simulate(P, damping, teleport, c, reference, backend)
        out.append((int(k), h.tv))
    return out
