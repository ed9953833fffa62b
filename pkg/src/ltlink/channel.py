"""Per-block channel models producing soft values for 456-bit blocks.

Bits map to bipolar symbols (bit 1 -> +1.0, bit 0 -> -1.0) and come
back as float soft values; the decoder side slices at zero. Every
model draws from a counter-keyed generator seeded with (seed,
block_no), so block n's noise is one function of the key, independent
of how many blocks were sent before it. That property lets sweeps
reuse identical noise across configurations that share a seed.

Draw order inside a block is part of the contract and is pinned in
each model's docstring: reordering draws would silently change every
downstream measurement even with seeds held fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

BLOCK_BITS = 456


def bipolar(bits: np.ndarray) -> np.ndarray:
    return 2.0 * np.asarray(bits, dtype=np.float64) - 1.0


def hard_decision(values: np.ndarray) -> np.ndarray:
    """Slice soft values at zero; exact zero decodes to bit 0."""
    return (np.asarray(values) > 0).astype(np.uint8)


def _rng(seed: int, block_no: int) -> np.random.Generator:
    key = np.array([seed, block_no], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class Bsc:
    """Binary symmetric channel; hard flips delivered as +-1 values.

    Draws: one uniform per bit, flip when u < p.
    """

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"flip probability out of range: {self.p}")

    def transmit(self, bits: np.ndarray, seed: int, block_no: int) -> np.ndarray:
        gen = _rng(seed, block_no)
        flips = gen.random(bits.shape[0]) < self.p
        return bipolar(bits) * np.where(flips, -1.0, 1.0)


@dataclass(frozen=True)
class Awgn:
    """Additive white Gaussian noise at a given signal-to-noise ratio.

    sigma^2 = 1 / (2 * 10^(sir_db/10)). Draws: one normal per bit.
    """

    sir_db: float

    def sigma(self) -> float:
        return math.sqrt(1.0 / (2.0 * 10.0 ** (self.sir_db / 10.0)))

    def transmit(self, bits: np.ndarray, seed: int, block_no: int) -> np.ndarray:
        gen = _rng(seed, block_no)
        return bipolar(bits) + self.sigma() * gen.standard_normal(bits.shape[0])


@dataclass(frozen=True)
class CorrelatedFading:
    """Block-fading Rayleigh channel with AWGN inside each gain interval.

    The block is cut into spans of coherence_bits sharing one amplitude
    g = sqrt(-ln(1-u)), which has unit mean square, so the average
    received power matches the Awgn model at the same sir_db. Received
    value: g * (bipolar + noise). Draws: all span uniforms first, then
    one normal per bit.
    """

    sir_db: float
    coherence_bits: int = 114

    def __post_init__(self):
        if self.coherence_bits < 1:
            raise ValueError(f"coherence_bits must be positive: {self.coherence_bits}")

    def sigma(self) -> float:
        return math.sqrt(1.0 / (2.0 * 10.0 ** (self.sir_db / 10.0)))

    def transmit(self, bits: np.ndarray, seed: int, block_no: int) -> np.ndarray:
        gen = _rng(seed, block_no)
        n = bits.shape[0]
        spans = -(-n // self.coherence_bits)
        gains = np.sqrt(-np.log1p(-gen.random(spans)))
        per_bit = np.repeat(gains, self.coherence_bits)[:n]
        noise = self.sigma() * gen.standard_normal(n)
        return per_bit * (bipolar(bits) + noise)


@dataclass(frozen=True)
class TraceDriven:
    """Replays soft values recorded as raw little-endian float32.

    Block n reads values [456n, 456(n+1)); running past the end raises
    unless wrap=True, which re-reads the file modulo its length. The
    trace must hold at least one full block.
    """

    path: str
    wrap: bool = False

    def transmit(self, bits: np.ndarray, seed: int, block_no: int) -> np.ndarray:
        n = bits.shape[0]
        raw = _load_trace(str(Path(self.path)))
        if raw.shape[0] < n:
            raise ValueError(f"trace {self.path} holds {raw.shape[0]} values, block needs {n}")
        start = block_no * n
        if start + n <= raw.shape[0]:
            chunk = raw[start : start + n]
        elif self.wrap:
            idx = (start + np.arange(n)) % raw.shape[0]
            chunk = raw[idx]
        else:
            raise ValueError(
                f"trace {self.path} exhausted at block {block_no} "
                f"({raw.shape[0]} values); pass wrap=True to reuse it"
            )
        return chunk.astype(np.float64)


@lru_cache(maxsize=8)
def _load_trace(path: str) -> np.ndarray:
    return np.fromfile(path, dtype="<f4")


ChannelModel = Bsc | Awgn | CorrelatedFading | TraceDriven


def transmit(bits: np.ndarray, model: ChannelModel, seed: int, block_no: int) -> np.ndarray:
    """Send one block of hard bits; returns soft values, same length."""
    bits = np.asarray(bits, dtype=np.uint8)
    return model.transmit(bits, seed, block_no)
