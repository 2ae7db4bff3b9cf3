"""Deterministic 64-bit pseudo-randomness for matrix generation and experiments.

Everything random in this package flows through SplitMix64: state advances by
the golden-ratio constant and each output is the state passed through the
avalanche finalizer ``mix64``.  The same finalizer doubles as the seed mixer
for derived streams (per-trial seeds, shred seeds), so a single documented
primitive explains every random bit the package produces.

Bernoulli(p) sampling uses the threshold rule ``next_u64 < floor(p * 2**64)``.
Reproducibility is guaranteed per build: identical (seed, shape) arguments
yield identical bits on every run.  Cross-language bit-exactness is not a
goal.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a 64-bit avalanche permutation."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _MUL1) & MASK64
    x ^= x >> 27
    x = (x * _MUL2) & MASK64
    x ^= x >> 31
    return x


class SplitMix64:
    """Sequential SplitMix64 stream.

    Output i equals ``mix64(seed + (i+1) * GOLDEN)``, which is also how the
    vectorized ``u64_stream`` computes it; the two never disagree.
    """

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via masked rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        mask = (1 << (bound - 1).bit_length()) - 1
        while True:
            v = self.next_u64() & mask
            if v < bound:
                return v

    def permutation(self, n: int) -> tuple[int, ...]:
        """Uniform random permutation of range(n) by Fisher-Yates."""
        arr = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            arr[i], arr[j] = arr[j], arr[i]
        return tuple(arr)


def u64_stream(seed: int, count: int) -> np.ndarray:
    """Vectorized SplitMix64: the first ``count`` outputs for ``seed``."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    x = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MUL1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MUL2)
    x ^= x >> np.uint64(31)
    return x


def bernoulli_bits(count: int, p: float, seed: int) -> np.ndarray:
    """``count`` iid Bernoulli(p) bits as uint8, via the threshold rule."""
    threshold = int(p * (1 << 64))  # exact: float mantissa * 2^64 shifts the exponent
    if threshold <= 0:
        return np.zeros(count, dtype=np.uint8)
    if threshold > MASK64:
        return np.ones(count, dtype=np.uint8)
    draws = u64_stream(seed, count)
    return (draws < np.uint64(threshold)).astype(np.uint8)
