"""Loading vectors/matrices from files and writing reports."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

VECTOR_KEYS = ("scores", "v", "w", "witness", "target", "alphas", "frequencies")


def _load_numbers(path):
    spec = str(path).strip()
    # inline JSON such as "[0.2, 0.8]" is accepted in place of a file
    text = spec if spec.startswith("[") else Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        rows = [line.split() for line in text.splitlines()
                if line.strip() and not line.lstrip().startswith("#")]
        return [[float(x) for x in r] for r in rows]
    if isinstance(data, dict):
        for key in VECTOR_KEYS + ("matrix", "M"):
            if key in data:
                return data[key]
        raise ValueError(f"{path}: no vector found (expected one of {VECTOR_KEYS})")
    return data


def load_vector(spec, n: int, normalize: bool = False) -> np.ndarray:
    """Vector from ``"uniform"``, an inline JSON list or a file (JSON list/object
    or whitespace text).

    With ``normalize`` the vector is scaled to unit 1-norm, absorbing
    rounding in hand-written files.
    """
    if spec == "uniform":
        return np.full(n, 1.0 / n)
    data = _load_numbers(spec)
    x = np.asarray(data, dtype=float).ravel()
    if x.size != n:
        raise ValueError(f"{spec}: expected {n} values, found {x.size}")
    if normalize:
        if np.any(x <= 0):
            raise ValueError(f"{spec}: entries must be positive")
        x = x / x.sum()
    return x


def load_matrix(path, n: int) -> np.ndarray:
    m = np.asarray(_load_numbers(path), dtype=float)
    if m.shape != (n, n):
        raise ValueError(f"{path}: expected a {n}x{n} matrix, found shape {m.shape}")
    return m


def dumps(obj) -> str:
    """Deterministic JSON (insertion-ordered keys, shortest float repr)."""
    return json.dumps(obj, indent=2, allow_nan=False)


def vector_csv(scores, ranking, labels=None) -> str:
    rank_of = {int(node): k + 1 for k, node in enumerate(ranking)}
    lines = ["node,label,score,rank"]
    for i, s in enumerate(scores):
        lab = labels[i] if labels else str(i)
        lines.append(f"{i},{lab},{float(s)!r},{rank_of[i]}")
    return "\n".join(lines) + "\n"
