"""Frozen interoperability fixtures and their generators.

The data files under ltlink/fixtures/ pin every convention another
implementation would need to interoperate: the 456-bit interleaver map,
the two puncturing patterns, block-check test vectors, and the seeded
generator's first outputs. Generators here recompute each fixture from
its defining rule; verify_all() confirms the shipped files and their
SHA256SUMS still match. Tests and `ltlink fixtures verify` both call it.

Generator vectors were cross-checked against an independently compiled
C routine once, then frozen; CRC vectors come from binascii.crc_hqx,
which shares no code with the production register implementation.
"""

from __future__ import annotations

import binascii
import hashlib
from importlib import resources

import numpy as np

from ..rng import SplitMix64

RADIO_BITS = 456

FIRE_POLY = (1 << 40) | (1 << 26) | (1 << 23) | (1 << 17) | (1 << 3) | 1
CRC16_POLY = (1 << 16) | 0x1021

_FILES = (
    "interleaver_456.txt",
    "puncture_cs2.txt",
    "puncture_cs3.txt",
    "crc16_vectors.txt",
    "fire40_vectors.txt",
    "splitmix64_vectors.txt",
)


def interleaver_map() -> np.ndarray:
    """position[i] = channel slot of pre-interleave bit i (456 entries).

    Block-diagonal rule: bit i goes to 114*(i mod 4) + 2*((49*i) mod 57)
    + ((i mod 8) div 4). The multiplier 49 spreads neighboring input
    bits 98 slots apart inside a 114-slot quarter.
    """
    i = np.arange(RADIO_BITS, dtype=np.int64)
    pos = 114 * (i % 4) + 2 * ((49 * i) % 57) + ((i % 8) // 4)
    return pos


def puncture_pattern(coded_bits: int, punctured_bits: int) -> np.ndarray:
    """Sorted indices of coded bits removed before transmission.

    Only odd positions (the second encoder output of a trellis step)
    are ever removed, at evenly spaced steps, so every step keeps at
    least one output and the decoder never faces a fully erased step.
    """
    steps = coded_bits // 2
    if punctured_bits > steps:
        raise ValueError(f"cannot puncture {punctured_bits} of {steps} steps")
    sel = np.array([(t * steps) // punctured_bits for t in range(punctured_bits)], dtype=np.int64)
    return 2 * sel + 1


def _gf2_remainder(value: int, top: int, poly: int, width: int) -> int:
    """Long division of value (degree < top) by poly; independent of the
    table-driven register in gprs.py."""
    for bitpos in range(top - 1, width - 1, -1):
        if (value >> bitpos) & 1:
            value ^= poly << (bitpos - width)
    return value


def fire40_parity(message: bytes) -> int:
    """40-bit block-check remainder of message·x^40, zero-preserving."""
    value = int.from_bytes(message, "big") << 40
    return _gf2_remainder(value, 8 * len(message) + 40, FIRE_POLY, 40)


def crc16_reference(message: bytes) -> int:
    """Zero-init CCITT CRC over bytes, straight from the stdlib."""
    return binascii.crc_hqx(message, 0)


def _vector_messages() -> list[bytes]:
    msgs = [b"", b"\x00", b"\xff", b"123456789", bytes(range(32))]
    gen = SplitMix64(0x5EED)
    for n in (1, 7, 23, 55):
        msgs.append(bytes((gen.next_u64() >> 8) & 0xFF for _ in range(n)))
    return msgs


def _render() -> dict[str, str]:
    """Current content of every fixture, keyed by file name."""
    out: dict[str, str] = {}
    out["interleaver_456.txt"] = "\n".join(str(v) for v in interleaver_map().tolist()) + "\n"
    out["puncture_cs2.txt"] = "\n".join(str(v) for v in puncture_pattern(588, 132).tolist()) + "\n"
    out["puncture_cs3.txt"] = "\n".join(str(v) for v in puncture_pattern(676, 220).tolist()) + "\n"

    lines = ["# message_hex crc16_hex"]
    for m in _vector_messages():
        lines.append(f"{m.hex() or '-'} {crc16_reference(m):04x}")
    out["crc16_vectors.txt"] = "\n".join(lines) + "\n"

    lines = ["# message_hex fire40_hex"]
    for m in _vector_messages():
        lines.append(f"{m.hex() or '-'} {fire40_parity(m):010x}")
    out["fire40_vectors.txt"] = "\n".join(lines) + "\n"

    lines = ["# seed_hex first4_outputs_hex"]
    for seed in (0, 1, 0x123456789ABCDEF, 0xFFFFFFFFFFFFFFFF):
        gen = SplitMix64(seed)
        vals = " ".join(f"{gen.next_u64():016x}" for _ in range(4))
        lines.append(f"{seed:016x} {vals}")
    out["splitmix64_vectors.txt"] = "\n".join(lines) + "\n"
    return out


def _data_dir():
    return resources.files("ltlink.fixtures")


def read_fixture(name: str) -> str:
    return (_data_dir() / name).read_text()


def write_all(dirpath) -> None:
    """Regenerate every fixture file plus SHA256SUMS into dirpath."""
    from pathlib import Path

    dirpath = Path(dirpath)
    dirpath.mkdir(parents=True, exist_ok=True)
    rendered = _render()
    sums = []
    for name in _FILES:
        (dirpath / name).write_text(rendered[name])
        digest = hashlib.sha256(rendered[name].encode()).hexdigest()
        sums.append(f"{digest}  {name}")
    (dirpath / "SHA256SUMS").write_text("\n".join(sums) + "\n")


def verify_all() -> list[str]:
    """Return a list of problems; empty means every fixture checks out."""
    problems: list[str] = []
    rendered = _render()
    try:
        sums_text = read_fixture("SHA256SUMS")
    except FileNotFoundError:
        return ["SHA256SUMS missing"]
    recorded = {}
    for line in sums_text.strip().splitlines():
        digest, name = line.split()
        recorded[name] = digest
    for name in _FILES:
        try:
            shipped = read_fixture(name)
        except FileNotFoundError:
            problems.append(f"{name}: missing")
            continue
        if name not in recorded:
            problems.append(f"{name}: not listed in SHA256SUMS")
        elif hashlib.sha256(shipped.encode()).hexdigest() != recorded[name]:
            problems.append(f"{name}: SHA256 mismatch against SHA256SUMS")
        if shipped != rendered[name]:
            problems.append(f"{name}: content differs from regeneration")
    return problems
