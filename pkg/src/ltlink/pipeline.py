"""Session pipeline: LT symbols carried inside coded 456-bit radio blocks.

One session moves a k-word message across the channel. The sender
derives symbol seeds on a fixed schedule (seed of symbol i is
session_seed + i mod 2^64, the standard splittable-stream idiom), packs
symbols_per_block payload words big-endian into the scheme's data
field, and sends block after block until the receiver's peeling decoder
completes or the transmit budget (1 + max_overhead) * k symbols runs
out. Blocks are all-or-nothing: a failed block check discards every
symbol in the block, and the final block may overshoot the budget
since symbols only travel in whole blocks.

The receiver regenerates the same seed schedule, so payload words are
the only symbol content on the air. Fountain overhead is measured over
transmitted symbols: lost symbols still count, which is what makes the
coding scheme comparison meaningful.

RAW blocks carry 14 words in 448 of the 456 bits with no block check;
the receiver is genie-aided, discarding a block iff any payload bit
arrived wrong. A real check field would displace payload words and
change the pinned per-block symbol counts, so none is offered.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import channel as chan
from . import gprs
from .gprs import Scheme
from .lt import EncodedSymbol, LtDecoder, LtEncoder
from .rng import MASK64, SplitMix64, derive_seed
from .soliton import DegreeDistribution, build_distribution

_MSG_TAG = 0x4D5347  # stream label for message words
_CHAN_TAG = 0x4348    # stream label for channel noise


@dataclass(frozen=True)
class PipelineConfig:
    scheme: Scheme
    model: chan.ChannelModel
    k: int = 1021
    c: float = 0.1
    delta: float = 0.5
    max_overhead: float = 0.5


@dataclass(frozen=True)
class BlockReport:
    block_no: int
    tx_symbols: int     # cumulative, including lost blocks
    rx_symbols: int     # cumulative symbols accepted by the receiver
    recovered: int      # message symbols known after this block
    complete: bool
    accepted: bool      # this block passed its integrity check
    jump: int           # newly recovered message symbols this block

    CSV_FIELDS = ("block_no", "tx_symbols", "rx_symbols", "recovered", "complete")

    def csv_row(self) -> str:
        return (
            f"{self.block_no},{self.tx_symbols},{self.rx_symbols},"
            f"{self.recovered},{int(self.complete)}"
        )


@dataclass
class SessionResult:
    complete: bool
    k: int
    tx_symbols: int
    rx_symbols: int
    blocks_sent: int
    blocks_accepted: int
    max_jump: int
    trace: list[BlockReport] = field(repr=False)

    @property
    def fountain_overhead(self) -> float | None:
        """epsilon: transmitted symbols over k, minus 1; None if failed."""
        if not self.complete:
            return None
        return self.tx_symbols / self.k - 1.0

    @property
    def total_overhead(self) -> float | None:
        """Channel bits actually spent per message bit, minus 1."""
        if not self.complete:
            return None
        return (self.blocks_sent * gprs.RADIO_BITS) / (32.0 * self.k) - 1.0


def message_words(session_seed: int, k: int) -> np.ndarray:
    """The session's message: k pseudorandom 32-bit words."""
    gen = SplitMix64(derive_seed(session_seed, _MSG_TAG))
    return np.array([gen.next_u64() >> 32 for _ in range(k)], dtype=np.uint32)


def symbol_seed(session_seed: int, index: int) -> int:
    return (session_seed + index) & MASK64


def _words_to_field(words: np.ndarray, field_bits: int) -> np.ndarray:
    """Big-endian words packed at the front; zero fill to field width."""
    bits = np.unpackbits(np.frombuffer(words.astype(">u4").tobytes(), dtype=np.uint8))
    if bits.shape[0] > field_bits:
        raise ValueError(f"{bits.shape[0]} payload bits exceed {field_bits}-bit field")
    out = np.zeros(field_bits, dtype=np.uint8)
    out[: bits.shape[0]] = bits
    return out


def _field_to_words(bits: np.ndarray, count: int) -> np.ndarray:
    packed = np.packbits(bits[: 32 * count])
    return np.frombuffer(packed.tobytes(), dtype=">u4").astype(np.uint32)


def run_session(
    config: PipelineConfig,
    session_seed: int,
    channel_seed: int | None = None,
    dist: DegreeDistribution | None = None,
) -> SessionResult:
    """Send one message until decoded or out of transmit budget.

    channel_seed defaults to a stream derived from session_seed; sweeps
    pass their own so noise can be held common across configurations.
    A prebuilt distribution for (k, c, delta) skips table setup.
    """
    if dist is None:
        dist = build_distribution(config.k, config.c, config.delta)
    elif dist.k != config.k:
        raise ValueError(f"distribution k={dist.k} does not match config k={config.k}")
    if channel_seed is None:
        channel_seed = derive_seed(session_seed, _CHAN_TAG)

    params = gprs.scheme_params(config.scheme)
    spb = params.symbols_per_block
    budget = int((1.0 + config.max_overhead) * config.k)

    encoder = LtEncoder(message_words(session_seed, config.k), dist)
    decoder = LtDecoder(dist)
    trace: list[BlockReport] = []
    tx = rx = accepted_blocks = max_jump = 0
    block_no = 0

    while not decoder.complete and tx < budget:
        first = block_no * spb
        symbols = [encoder.symbol(symbol_seed(session_seed, first + j)) for j in range(spb)]
        words = np.array([s.payload for s in symbols], dtype=np.uint32)

        if config.scheme is Scheme.RAW:
            radio = _words_to_field(words, gprs.RADIO_BITS)
            soft = chan.transmit(radio, config.model, channel_seed, block_no)
            hard = chan.hard_decision(soft)
            ok = bool((hard[: 32 * spb] == radio[: 32 * spb]).all())
            rx_words = _field_to_words(hard, spb) if ok else None
        else:
            data_field = _words_to_field(words, params.data_bits)
            radio = gprs.encode_block(data_field, config.scheme)
            soft = chan.transmit(radio, config.model, channel_seed, block_no)
            out = gprs.decode_block(soft, config.scheme)
            ok = out.bcs_ok
            rx_words = _field_to_words(out.data, spb) if ok else None

        tx += spb
        jump = 0
        if ok:
            rx += spb
            accepted_blocks += 1
            for j, w in enumerate(rx_words.tolist()):
                sym = EncodedSymbol(seed=symbol_seed(session_seed, first + j), payload=int(w), degree=0)
                jump += decoder.ingest(sym)
            max_jump = max(max_jump, jump)
        block_no += 1
        trace.append(
            BlockReport(
                block_no=block_no,
                tx_symbols=tx,
                rx_symbols=rx,
                recovered=decoder.recovered_count,
                complete=decoder.complete,
                accepted=ok,
                jump=jump,
            )
        )

    result = SessionResult(
        complete=decoder.complete,
        k=config.k,
        tx_symbols=tx,
        rx_symbols=rx,
        blocks_sent=block_no,
        blocks_accepted=accepted_blocks,
        max_jump=max_jump,
        trace=trace,
    )
    if decoder.complete:
        # decoded words must be the message; anything else is a defect
        if not (decoder.message() == encoder._payloads).all():
            raise AssertionError("decoder completed with wrong message content")
    return result


def write_trace_csv(path, trace: list[BlockReport]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(BlockReport.CSV_FIELDS) + "\n")
        for row in trace:
            fh.write(row.csv_row() + "\n")
