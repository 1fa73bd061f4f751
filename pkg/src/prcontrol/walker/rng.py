"""Counter-based SplitMix64 uniforms.

Draw ``k`` of stream ``seed`` is ``mix(seed + (k + 1) * GOLDEN)`` mapped to
``[0, 1)`` by its top 53 bits. Any draw can be computed independently,
so numpy can vectorize the stream and the compiled kernel reproduces it
bit for bit.
"""

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1
TO_UNIT = 2.0 ** -53


def splitmix64(x):
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (x ^ (x >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Draws ``start .. start + count - 1`` of the stream as float64."""
    seed = np.uint64(int(seed) & MASK64)
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = seed + k * np.uint64(GOLDEN)
    return (splitmix64(x) >> np.uint64(11)).astype(np.float64) * TO_UNIT
