"""Deterministic pseudorandom streams shared by both kernel backends.

The colony algorithms must produce bit-identical results whether the
construction kernel runs compiled or in pure Python, so the generator is a
splitmix64 implemented identically in both places (the compiled kernel
carries its own C copy of the same recurrence). Dataset synthesis does not
have that constraint and uses numpy generators instead.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
# 2**-53; multiplying the top 53 bits by this yields a double in [0, 1)
_INV_2_53 = 1.0 / 9007199254740992.0


def mix64(x: int) -> int:
    """splitmix64 finalizer: a bijective 64-bit scramble."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


class SplitMix64:
    """Minimal splitmix64 stream with float and bounded-int draws."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        k = int(self.random() * n)
        return n - 1 if k >= n else k

    def spawn_key(self) -> int:
        """Derive an independent child seed/state from this stream."""
        return self.next_u64()


def derive_seed(master: int, *parts: int) -> int:
    """Fold integer parts into a master seed; stable across processes.

    Used so that every (cell, run) of a sweep owns a reproducible seed that
    depends only on the master seed and the cell's parameter values, never
    on grid enumeration order.
    """
    s = mix64(master ^ _GOLDEN)
    for part in parts:
        s = mix64(s ^ (int(part) & MASK64))
    return s


def float_key(x: float) -> int:
    """The raw IEEE-754 bits of a float, as an int key for derive_seed."""
    return int(np.float64(x).view(np.uint64))
