"""Session pipeline: framing, loss accounting, trace rows, composition."""

import numpy as np
import pytest

from ltlink import channel
from ltlink.gprs import Scheme, scheme_params
from ltlink.lt import LtDecoder
from ltlink.pipeline import (
    BlockReport,
    PipelineConfig,
    message_words,
    run_session,
    symbol_seed,
    write_trace_csv,
)
from ltlink.rng import MASK64
from ltlink.soliton import build_distribution

NOISELESS = channel.Bsc(0.0)


@pytest.fixture(scope="module")
def dist200():
    return build_distribution(200, 0.1, 0.5)


def _cfg(scheme, model=NOISELESS, k=200, max_overhead=1.0):
    return PipelineConfig(scheme=scheme, model=model, k=k, max_overhead=max_overhead)


@pytest.mark.parametrize("scheme", list(Scheme))
def test_noiseless_session_completes(scheme, dist200):
    res = run_session(_cfg(scheme), session_seed=1234, dist=dist200)
    assert res.complete
    assert res.blocks_accepted == res.blocks_sent
    assert res.rx_symbols == res.tx_symbols
    assert res.fountain_overhead is not None and res.fountain_overhead >= 0.0


@pytest.mark.parametrize("scheme", list(Scheme))
def test_tx_counts_are_block_multiples(scheme, dist200):
    spb = scheme_params(scheme).symbols_per_block
    res = run_session(_cfg(scheme), session_seed=77, dist=dist200)
    assert res.tx_symbols == res.blocks_sent * spb
    for row in res.trace:
        assert row.tx_symbols == row.block_no * spb


def test_deterministic_given_seeds(dist200):
    cfg = _cfg(Scheme.CS2, model=channel.Awgn(4.0))
    a = run_session(cfg, session_seed=5, channel_seed=9, dist=dist200)
    b = run_session(cfg, session_seed=5, channel_seed=9, dist=dist200)
    assert [r.csv_row() for r in a.trace] == [r.csv_row() for r in b.trace]
    assert a.tx_symbols == b.tx_symbols and a.complete == b.complete


def test_channel_seed_changes_noise_not_stream(dist200):
    cfg = _cfg(Scheme.CS2, model=channel.Awgn(2.0))
    a = run_session(cfg, session_seed=5, channel_seed=1, dist=dist200)
    b = run_session(cfg, session_seed=5, channel_seed=2, dist=dist200)
    # same LT randomness, different noise: outcomes may differ, but
    # a lossless rerun of the same session seed pins the floor
    clean = run_session(_cfg(Scheme.CS2), session_seed=5, dist=dist200)
    assert clean.complete
    for res in (a, b):
        if res.complete:
            assert res.tx_symbols >= clean.tx_symbols


def test_loss_only_raises_transmitted_count(dist200):
    # with the channel seed held, a noisier channel can only lose more
    cfg_clean = _cfg(Scheme.CS3)
    cfg_noisy = _cfg(Scheme.CS3, model=channel.Awgn(2.2))
    clean = run_session(cfg_clean, session_seed=21, channel_seed=4, dist=dist200)
    noisy = run_session(cfg_noisy, session_seed=21, channel_seed=4, dist=dist200)
    assert clean.complete
    if noisy.complete:
        assert noisy.tx_symbols >= clean.tx_symbols
        assert noisy.blocks_accepted <= noisy.blocks_sent


def test_budget_exhaustion_marks_failure(dist200):
    # a channel this bad delivers nothing; session must stop on budget
    cfg = _cfg(Scheme.CS2, model=channel.Bsc(0.5), max_overhead=0.45)
    res = run_session(cfg, session_seed=3, dist=dist200)
    assert not res.complete
    assert res.fountain_overhead is None and res.total_overhead is None
    budget = int(1.45 * 200)
    spb = scheme_params(Scheme.CS2).symbols_per_block
    assert res.tx_symbols >= budget
    assert res.tx_symbols - budget < spb  # overshoot below one block


def test_raw_genie_discards_any_payload_error(dist200):
    # RAW at heavy noise: accepted blocks imply exact payload delivery,
    # which the completed decode then proves end to end
    cfg = _cfg(Scheme.RAW, model=channel.Awgn(7.0), max_overhead=3.0)
    res = run_session(cfg, session_seed=8, dist=dist200)
    assert res.blocks_accepted < res.blocks_sent  # some blocks had errors
    assert res.complete  # yet the message arrived intact


def test_composition_block_quantized_inefficiency(dist200):
    """Lossless session consumption equals codec-only consumption,
    rounded up to whole blocks: the pipeline adds framing, not waste."""
    from ltlink.lt import EncodedSymbol, LtEncoder

    k = 200
    session_seed = 4242
    for scheme in (Scheme.RAW, Scheme.CS1, Scheme.CS2):
        spb = scheme_params(scheme).symbols_per_block
        res = run_session(_cfg(scheme), session_seed=session_seed, dist=dist200)
        # replay the same symbol stream straight into a fresh decoder
        enc = LtEncoder(message_words(session_seed, k), dist200)
        dec = LtDecoder(dist200)
        needed = 0
        while not dec.complete:
            dec.ingest(enc.symbol(symbol_seed(session_seed, needed)))
            needed += 1
        whole_blocks = -(-needed // spb) * spb
        assert res.tx_symbols == whole_blocks, scheme


def test_trace_rows_monotone(dist200):
    res = run_session(_cfg(Scheme.CS2, model=channel.Awgn(3.0)), session_seed=15, dist=dist200)
    rows = res.trace
    assert [r.block_no for r in rows] == list(range(1, len(rows) + 1))
    for a, b in zip(rows, rows[1:]):
        assert b.tx_symbols > a.tx_symbols
        assert b.rx_symbols >= a.rx_symbols
        assert b.recovered >= a.recovered
    assert rows[-1].complete == res.complete


def test_trace_csv_layout(tmp_path, dist200):
    res = run_session(_cfg(Scheme.CS4), session_seed=2, dist=dist200)
    path = tmp_path / "trace.csv"
    write_trace_csv(path, res.trace)
    lines = path.read_text().splitlines()
    assert lines[0] == "block_no,tx_symbols,rx_symbols,recovered,complete"
    assert len(lines) == len(res.trace) + 1
    first = lines[1].split(",")
    assert len(first) == 5 and first[0] == "1"


def test_message_words_deterministic():
    a = message_words(99, 50)
    b = message_words(99, 50)
    c = message_words(100, 50)
    assert (a == b).all()
    assert not (a == c).all()
    assert a.dtype == np.uint32


def test_symbol_seed_schedule_wraps():
    assert symbol_seed(MASK64, 1) == 0
    assert symbol_seed(10, 5) == 15


def test_mismatched_dist_rejected(dist200):
    cfg = PipelineConfig(scheme=Scheme.CS2, model=NOISELESS, k=100)
    with pytest.raises(ValueError):
        run_session(cfg, session_seed=1, dist=dist200)


def test_max_jump_recorded(dist200):
    res = run_session(_cfg(Scheme.RAW), session_seed=31, dist=dist200)
    assert res.complete
    assert res.max_jump == max(r.jump for r in res.trace)
    assert sum(r.jump for r in res.trace) == 200
