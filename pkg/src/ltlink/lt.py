"""LT fountain codec: symbol generation and incremental peeling decode.

An encoded symbol is the XOR of a random subset of the k 32-bit message
words. The subset is never transmitted: it is regenerated from the symbol's
64-bit seed (degree drawn from the Robust Soliton table, then that many
distinct uniform indices, all from the pinned SplitMix64 stream). A symbol
is therefore 12 bytes on the wire: seed then payload, both big-endian.

The decoder peels incrementally: every ingested symbol has its already
recovered neighbors subtracted immediately, and any residual degree-1
symbol triggers the chain reaction (recover, subtract everywhere, repeat).
Feeding the same multiset of symbols in any order ends in the same state.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .soliton import DegreeDistribution

PAYLOAD_BITS = 32
_PAYLOAD_MASK = 0xFFFFFFFF

WIRE = struct.Struct(">QI")
WIRE_BYTES = WIRE.size  # 12: 8-byte seed, 4-byte payload


@dataclass(frozen=True)
class MessageSymbol:
    """One 32-bit message word with its position in the message."""

    index: int
    payload: int

    def __post_init__(self):
        if not 0 <= self.payload <= _PAYLOAD_MASK:
            raise ValueError(f"payload exceeds {PAYLOAD_BITS} bits: {self.payload:#x}")
        if self.index < 0:
            raise ValueError(f"negative index: {self.index}")


@dataclass(frozen=True)
class EncodedSymbol:
    """XOR payload plus the seed that regenerates its neighbor set."""

    seed: int
    payload: int
    degree: int

    def pack(self) -> bytes:
        return WIRE.pack(self.seed, self.payload)


def unpack_symbol(buf: bytes, dist: DegreeDistribution) -> EncodedSymbol:
    """Parse one wire record, regenerating the degree from the seed."""
    seed, payload = WIRE.unpack(buf)
    degree = len(neighbors_of(seed, dist))
    return EncodedSymbol(seed=seed, payload=payload, degree=degree)


def neighbors_of(seed: int, dist: DegreeDistribution) -> np.ndarray:
    """Neighbor index set of the symbol with this seed (draw order)."""
    return kernels.sample_neighbors(seed, dist.cdf, dist.k)


def _as_payload_array(message: Sequence) -> np.ndarray:
    """Accept MessageSymbol sequences or plain ints; return uint32 array."""
    if len(message) and isinstance(message[0], MessageSymbol):
        indices = sorted(sym.index for sym in message)
        if indices != list(range(len(message))):
            raise ValueError("message set must cover indices 0..k-1 exactly once")
        arr = np.zeros(len(message), dtype=np.uint32)
        for sym in message:
            arr[sym.index] = sym.payload
        return arr
    arr = np.asarray(message, dtype=np.uint64)
    if arr.ndim != 1 or (arr > _PAYLOAD_MASK).any():
        raise ValueError("message payloads must be 32-bit words")
    return arr.astype(np.uint32)


class LtEncoder:
    """Generates encoded symbols for a fixed message; pure in the seed."""

    def __init__(self, message: Sequence, dist: DegreeDistribution):
        payloads = _as_payload_array(message)
        if payloads.shape[0] != dist.k:
            raise ValueError(f"message has {payloads.shape[0]} symbols, distribution k={dist.k}")
        self.dist = dist
        self._payloads = payloads

    def symbol(self, seed: int) -> EncodedSymbol:
        idx = kernels.sample_neighbors(seed, self.dist.cdf, self.dist.k)
        payload = int(np.bitwise_xor.reduce(self._payloads[idx]))
        return EncodedSymbol(seed=seed, payload=payload, degree=idx.shape[0])

    def symbols(self, seeds: Iterable[int]) -> list[EncodedSymbol]:
        return [self.symbol(s) for s in seeds]


def encode_symbol(message: Sequence, dist: DegreeDistribution, seed: int) -> EncodedSymbol:
    """One-shot convenience wrapper around LtEncoder."""
    return LtEncoder(message, dist).symbol(seed)


class LtDecoder:
    """Incremental peeling decoder over a fixed (k, distribution) pair."""

    def __init__(self, dist: DegreeDistribution):
        self.dist = dist
        self.k = dist.k
        self.consumed = 0
        self.recovered_count = 0
        self._recovered: list[int | None] = [None] * self.k
        self._pending: dict[int, list] = {}  # id -> [residual neighbor set, residual payload]
        self._by_index: list[set[int]] = [set() for _ in range(self.k)]
        self._ripple: list[int] = []
        self._next_id = 0

    @property
    def complete(self) -> bool:
        return self.recovered_count == self.k

    def ingest(self, sym: EncodedSymbol) -> int:
        """Absorb one symbol and peel to exhaustion.

        Returns the number of message symbols recovered by this call.
        Symbols whose regenerated degree contradicts the stored one are
        rejected: they were produced against a different (k, c, delta).
        """
        idx = kernels.sample_neighbors(sym.seed, self.dist.cdf, self.k)
        if sym.degree and sym.degree != idx.shape[0]:
            raise ValueError(
                f"symbol degree {sym.degree} does not regenerate under k={self.k}; "
                "encoder and decoder distributions differ"
            )
        self.consumed += 1
        before = self.recovered_count

        residual = sym.payload
        rset = set()
        for j in idx.tolist():
            got = self._recovered[j]
            if got is None:
                rset.add(j)
            else:
                residual ^= got
        if rset:
            sid = self._next_id
            self._next_id += 1
            self._pending[sid] = [rset, residual]
            for j in rset:
                self._by_index[j].add(sid)
            if len(rset) == 1:
                self._ripple.append(sid)
                self._drain()
        return self.recovered_count - before

    def _drain(self):
        ripple = self._ripple
        while ripple:
            sid = ripple.pop()
            entry = self._pending.pop(sid, None)
            if entry is None or len(entry[0]) != 1:
                # already consumed, or a duplicate emptied by the cascade
                if entry is not None:
                    self._pending[sid] = entry
                continue
            (j,) = entry[0]
            self._by_index[j].discard(sid)
            self._resolve(j, entry[1])

    def _resolve(self, index: int, value: int):
        self._recovered[index] = value
        self.recovered_count += 1
        holders = self._by_index[index]
        self._by_index[index] = set()
        for sid in holders:
            entry = self._pending[sid]
            entry[1] ^= value
            entry[0].remove(index)
            n = len(entry[0])
            if n == 1:
                self._ripple.append(sid)
            elif n == 0:
                del self._pending[sid]

    def progress(self) -> tuple[int, int, float | None]:
        """(recovered, consumed, inefficiency); inefficiency only when complete."""
        ineff = self.consumed / self.k if self.complete else None
        return self.recovered_count, self.consumed, ineff

    def recovered_fraction(self) -> float:
        return self.recovered_count / self.k

    def message(self) -> np.ndarray:
        """The recovered 32-bit words; raises if decoding is incomplete."""
        if not self.complete:
            raise RuntimeError(f"decode incomplete: {self.recovered_count}/{self.k}")
        return np.array(self._recovered, dtype=np.uint32)

    def recovered_payload(self, index: int) -> int | None:
        return self._recovered[index]
