"""Radio-block coding schemes CS-1..CS-4 over a 456-bit channel block.

Each scheme packs a USF field, a data field, and a block check sequence
(BCS), then protects the result with a rate-1/2 convolutional code and
puncturing (CS-1..CS-3) or sends it uncoded (CS-4). All schemes finish
with the same 456-bit block-diagonal interleaver. RAW bypasses this
module entirely: the pipeline maps symbols straight onto channel bits.

Per-block layout (bits):

  scheme  usf  data  bcs  tail  coded  punctured  ->  radio
  CS-1      3   181   40     4    456          0       456
  CS-2      6   268   16     4    588        132       456
  CS-3      6   312   16     4    676        220       456
  CS-4     12   428   16     -    456          0       456

The BCS covers usf||data. CS-1 uses a 40-bit check (degree-40 product
polynomial with taps at 40, 26, 23, 17, 3, 0); the others use the
16-bit CCITT polynomial. Both registers start at zero and apply no
final inversion, so the all-zero block has an all-zero check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import fixtures, kernels


class Scheme(enum.Enum):
    """Channel-protection options for one 456-bit radio block."""

    RAW = "raw"
    CS1 = "cs1"
    CS2 = "cs2"
    CS3 = "cs3"
    CS4 = "cs4"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Scheme":
        try:
            return cls(text.strip().lower())
        except ValueError:
            options = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown scheme {text!r}; expected one of {options}") from None


@dataclass(frozen=True)
class SchemeParams:
    usf_bits: int
    data_bits: int
    bcs_bits: int
    tail_bits: int
    coded_bits: int      # after convolution, before puncturing
    punctured_bits: int
    symbols_per_block: int
    convolved: bool

    @property
    def payload_bits(self) -> int:
        return 32 * self.symbols_per_block


_PARAMS = {
    Scheme.RAW: SchemeParams(0, 456, 0, 0, 456, 0, 14, False),
    Scheme.CS1: SchemeParams(3, 181, 40, 4, 456, 0, 5, True),
    Scheme.CS2: SchemeParams(6, 268, 16, 4, 588, 132, 8, True),
    Scheme.CS3: SchemeParams(6, 312, 16, 4, 676, 220, 9, True),
    Scheme.CS4: SchemeParams(12, 428, 16, 0, 456, 0, 13, False),
}

RADIO_BITS = fixtures.RADIO_BITS


def scheme_params(scheme: Scheme) -> SchemeParams:
    return _PARAMS[scheme]


class _CheckRegister:
    """Table-driven MSB-first polynomial division, zero-preserving."""

    def __init__(self, width: int, poly: int):
        self.width = width
        self.poly = poly  # includes the x^width term
        self._mask = (1 << width) - 1
        low = poly & self._mask
        table = []
        for byte in range(256):
            reg = byte << (width - 8)
            for _ in range(8):
                if reg >> (width - 1) & 1:
                    reg = ((reg << 1) & self._mask) ^ low
                else:
                    reg = (reg << 1) & self._mask
            table.append(reg)
        self._table = table

    def remainder(self, bits: np.ndarray) -> int:
        """Remainder of bits-as-polynomial times x^width (MSB first)."""
        n = bits.shape[0]
        n8 = n - (n % 8)
        reg = 0
        w = self.width
        if n8:
            for byte in np.packbits(bits[:n8]).tolist():
                reg = ((reg << 8) & self._mask) ^ self._table[((reg >> (w - 8)) ^ byte) & 0xFF]
        for b in bits[n8:].tolist():
            reg = (reg << 1) ^ (b << w)
            if reg >> w & 1:
                reg ^= self.poly
        return reg & self._mask

    def parity(self, bits: np.ndarray) -> np.ndarray:
        rem = self.remainder(bits)
        w = self.width
        return np.array([(rem >> (w - 1 - i)) & 1 for i in range(w)], dtype=np.uint8)


_CRC16 = _CheckRegister(16, fixtures.CRC16_POLY)
_FIRE40 = _CheckRegister(40, fixtures.FIRE_POLY)


def _checker(params: SchemeParams) -> _CheckRegister:
    return _FIRE40 if params.bcs_bits == 40 else _CRC16


def attach_bcs(header_and_data: np.ndarray, scheme: Scheme) -> np.ndarray:
    """Append the scheme's block check over usf||data."""
    params = _PARAMS[scheme]
    expected = params.usf_bits + params.data_bits
    if header_and_data.shape[0] != expected:
        raise ValueError(f"{scheme} block is {expected} bits, got {header_and_data.shape[0]}")
    return np.concatenate([header_and_data, _checker(params).parity(header_and_data)])


def check_bcs(header_data_bcs: np.ndarray, scheme: Scheme) -> bool:
    """True when the received check matches a recomputed one."""
    params = _PARAMS[scheme]
    split = params.usf_bits + params.data_bits
    recomputed = _checker(params).parity(header_data_bcs[:split])
    return bool((header_data_bcs[split:] == recomputed).all())


_ILV = fixtures.interleaver_map()
_DEILV = np.argsort(_ILV)
_PUNCTURE = {
    Scheme.CS2: fixtures.puncture_pattern(588, 132),
    Scheme.CS3: fixtures.puncture_pattern(676, 220),
}
_KEEP = {
    s: np.setdiff1d(np.arange(_PARAMS[s].coded_bits), p) for s, p in _PUNCTURE.items()
}


def puncture(coded: np.ndarray, scheme: Scheme) -> np.ndarray:
    if scheme not in _PUNCTURE:
        return coded
    return coded[_KEEP[scheme]]


def depuncture(soft: np.ndarray, scheme: Scheme) -> np.ndarray:
    """Re-expand to coded length; punctured slots carry zero confidence."""
    if scheme not in _PUNCTURE:
        return soft
    full = np.zeros(_PARAMS[scheme].coded_bits, dtype=np.float64)
    full[_KEEP[scheme]] = soft
    return full


def interleave(bits: np.ndarray) -> np.ndarray:
    out = np.empty_like(bits)
    out[_ILV] = bits
    return out


def deinterleave(values: np.ndarray) -> np.ndarray:
    return values[_ILV]


@dataclass(frozen=True)
class DecodedBlock:
    usf: np.ndarray
    data: np.ndarray
    bcs_ok: bool


def encode_block(data: np.ndarray, scheme: Scheme, usf: np.ndarray | None = None) -> np.ndarray:
    """data field -> 456 hard channel bits, per the scheme's chain."""
    params = _PARAMS[scheme]
    if scheme is Scheme.RAW:
        if data.shape[0] != RADIO_BITS:
            raise ValueError(f"raw block is {RADIO_BITS} bits, got {data.shape[0]}")
        return data.astype(np.uint8)
    if usf is None:
        usf = np.zeros(params.usf_bits, dtype=np.uint8)
    if data.shape[0] != params.data_bits:
        raise ValueError(f"{scheme} data field is {params.data_bits} bits, got {data.shape[0]}")
    frame = attach_bcs(np.concatenate([usf.astype(np.uint8), data.astype(np.uint8)]), scheme)
    if params.convolved:
        frame = np.concatenate([frame, np.zeros(params.tail_bits, dtype=np.uint8)])
        coded = kernels.conv_encode(frame)
        coded = puncture(coded, scheme)
    else:
        coded = frame
    if coded.shape[0] != RADIO_BITS:
        raise AssertionError(f"{scheme} produced {coded.shape[0]} radio bits")
    return interleave(coded)


def decode_block(soft: np.ndarray, scheme: Scheme) -> DecodedBlock:
    """456 soft channel values -> fields plus block-check verdict."""
    params = _PARAMS[scheme]
    if soft.shape[0] != RADIO_BITS:
        raise ValueError(f"radio block is {RADIO_BITS} values, got {soft.shape[0]}")
    if scheme is Scheme.RAW:
        raise ValueError("raw blocks carry no code; slice payload bits directly")
    stream = deinterleave(np.asarray(soft, dtype=np.float64))
    if params.convolved:
        stream = depuncture(stream, scheme)
        frame = kernels.viterbi_rate_half(stream, terminated=True)
        frame = frame[: params.usf_bits + params.data_bits + params.bcs_bits]
    else:
        # sign slice: positive soft value decodes to bit 1
        frame = (stream > 0).astype(np.uint8)
    usf = frame[: params.usf_bits]
    data = frame[params.usf_bits : params.usf_bits + params.data_bits]
    return DecodedBlock(usf=usf, data=data, bcs_ok=check_bcs(frame, scheme))
