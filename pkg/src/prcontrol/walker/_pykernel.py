"""Pure-Python walk kernel, used when the compiled extension is missing."""

from bisect import bisect_right

import numpy as np

from .rng import uniforms

CHUNK = 1 << 16


def walk(cum_p, cum_t, alpha, start_cdf, start, seed, steps, burn_in):
    """Run one chain and return visit counts as an int64 array.

    Draw 0 picks the start node when ``start < 0``; step ``t >= 1`` uses
    draws ``2t - 1`` (follow an arc or teleport) and ``2t`` (destination).
    States ``burn_in .. steps - 1`` are counted.
    """
    n = len(alpha)
    counts = [0] * n
    rows_p = [list(r) for r in np.asarray(cum_p)]
    rows_t = [list(r) for r in np.asarray(cum_t)]
    alpha = [float(a) for a in alpha]
    if start < 0:
        node = bisect_right(list(start_cdf), float(uniforms(seed, 0, 1)[0]))
    else:
        node = int(start)
    if burn_in == 0:
        counts[node] += 1
    t = 1
    while t < steps:
        m = min(CHUNK, steps - t)
        u = uniforms(seed, 2 * t - 1, 2 * m).tolist()
        for k in range(m):
            if u[2 * k] < alpha[node]:
                node = bisect_right(rows_p[node], u[2 * k + 1])
            else:
                node = bisect_right(rows_t[node], u[2 * k + 1])
            if t + k >= burn_in:
                counts[node] += 1
        t += m
    return np.array(counts, dtype=np.int64)
