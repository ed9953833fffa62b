"""Pinned portable pseudo-random generator (SplitMix64).

Every quantity that defines the identity of an encoded symbol (its degree
and neighbor set) is drawn from SplitMix64 so that a (seed, k, distribution)
triple reproduces the same symbol in any implementation, in any language.

Algorithm (Vigna's SplitMix64), all arithmetic mod 2**64:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    output = z ^ (z >> 31)

Derived draws are pinned too:

* ``random()``   -- (output >> 11) * 2**-53, a double in [0, 1).
* ``randbelow(n)`` -- draw 64-bit words, reject values >= 2**64 - (2**64 % n),
  return accepted word mod n (unbiased).

Test vectors live in ``ltlink/fixtures/splitmix64_vectors.txt`` and are
checked by the test suite and by ``ltlink fixtures verify``.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 output function: a strong 64-bit mixer (bijective)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(base: int, *parts: int) -> int:
    """Derive a child seed from a base seed and an index path.

    Defined as repeated mixing: s -> mix64((s + GAMMA) ^ mix64(part)).
    Used to key independent streams (message payloads, channel noise,
    per-trial sessions) off a single run seed.
    """
    s = base & MASK64
    for p in parts:
        s = mix64(((s + _GAMMA) & MASK64) ^ mix64(p & MASK64))
    return s


class SplitMix64:
    """Sequential SplitMix64 stream over a 64-bit seed."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randbelow(self, n: int) -> int:
        """Unbiased uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        # largest multiple of n that fits in 64 bits
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n
