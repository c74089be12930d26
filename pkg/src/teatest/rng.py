"""Counter-based splittable pseudo-random number generation.

The generator is SplitMix64: the 64-bit state advances by a fixed odd
increment (the golden-ratio constant) and every output is a bijective
xor-shift-multiply scramble of the state, so output ``r`` of the stream
with key ``s`` equals ``mix64(s + (r + 1) * GOLDEN)``. That makes it a pure
counter generator: a stream is fully determined by its key, and per-task
streams can be derived by hashing a task index into the key. Nothing here
depends on how work is later partitioned across workers.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(value: int) -> int:
    """Bijective 64-bit finalizer (xor-shift, multiply, repeat)."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Seedable 64-bit generator with the counter structure above."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def next_double(self) -> float:
        """Uniform double in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def next_below(self, bound: int) -> int:
        """Unbiased uniform integer in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound


def stream_for(seed: int, index: int) -> SplitMix64:
    """Independent stream for task ``index`` under a master ``seed``.

    The key is ``mix64(seed + GOLDEN * (index + 1))``; mix64 is bijective,
    so distinct indices give distinct keys for any fixed seed.
    """
    if index < 0:
        raise ValueError(f"index must be non-negative, got {index}")
    return SplitMix64(mix64((seed + GOLDEN * (index + 1)) & MASK64))
