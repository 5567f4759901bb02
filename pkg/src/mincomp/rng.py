"""Deterministic random bits from a splitmix64 stream.

Every random choice in this package comes from the generator defined here,
so runs are reproducible bit-for-bit across machines and implementations.
The algorithm and constants are fixed:

    state_{i}   = (seed + (i+1) * 0x9E3779B97F4A7C15) mod 2^64
    mix(z):       z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;  z &= 2^64-1
                  z ^= z >> 27;  z *= 0x94D049BB133111EB;  z &= 2^64-1
                  z ^= z >> 31
    output_i    = mix(state_i)

A 53-bit uniform is the top 53 bits of an output divided by 2^53 (exactly
representable as a double).  A Bernoulli(theta) bit is 1 iff that uniform
is < theta.  Per-task seeds for sweeps are derived as the first output of
the stream seeded with (master_seed XOR task_index).
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """The splitmix64 output function on one 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential splitmix64 stream."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def uniform53(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) / 9007199254740992.0  # 2^53

    def bit(self, theta: float) -> int:
        """One Bernoulli(theta) bit."""
        return 1 if self.uniform53() < theta else 0

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via floor(n * uniform53); fine for tiny n."""
        return int(n * self.uniform53())


def bernoulli_bits(n: int, theta: float, seed: int) -> str:
    """Vectorized n-bit Bernoulli(theta) string from the stream seeded with `seed`.

    Bit-identical to calling SplitMix64(seed).bit(theta) n times.
    """
    idx = np.arange(1, n + 1, dtype=np.uint64)
    state = (np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN))
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z = z ^ (z >> np.uint64(31))
    u = (z >> np.uint64(11)).astype(np.float64) / 9007199254740992.0
    bits = (u < theta).astype(np.uint8)
    return "".join("1" if b else "0" for b in bits)


def derive_seed(master_seed: int, task_index: int) -> int:
    """Per-task seed: first output of the stream seeded with master XOR index."""
    return SplitMix64((master_seed ^ task_index) & MASK64).next_u64()
