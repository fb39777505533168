"""Seeded splitmix64 stream.

Every random choice in the package flows through :class:`SplitMix64` so
that outputs are bit-identical across runs and platforms.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection on 64-bit words."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = n * ((1 << 64) // n)
        while True:
            w = self.next_u64()
            if w < limit:
                return w % n

    def digits(self, p: int, count: int) -> list[int]:
        return [self.below(p) for _ in range(count)]

    def fork(self, index: int) -> "SplitMix64":
        return SplitMix64(derive_seed(self.state, index))

    def sample_distinct(self, n: int, count: int) -> list[int]:
        """First ``count`` entries of a seeded Fisher-Yates shuffle of ``range(n)``."""
        if count > n:
            raise ValueError("cannot draw more distinct items than available")
        items = list(range(n))
        for i in range(count):
            j = i + self.below(n - i)
            items[i], items[j] = items[j], items[i]
        return items[:count]


def derive_seed(seed: int, index: int) -> int:
    """Per-trial child seed for ``(seed, index)``."""
    return mix64((seed & MASK64) ^ mix64((index + 1) * GOLDEN))
