"""Command-line front door: encode, decode, session, sweep, fixtures.

Settings resolve in precedence order: command-line flag, then
LTLINK_<KEY> environment variable, then config-file entry, then
built-in default. Config files are flat `key = value` text; `#` starts
a comment. Every command that writes an output also writes a
`*.config.txt` log of the fully resolved settings it ran with, seed
included, so any artifact can be regenerated.

Exit codes: 0 success, 2 usage or configuration problem, 3 input that
could not be parsed (bad header, truncated record), 4 decode failure
(valid input, insufficient symbols).

Symbol stream layout: 8-byte magic LTSYM001, then a 40-byte big-endian
header (k:u64, c:f64, delta:f64, original_length:u64, base_seed:u64),
then 12-byte records (seed:u64, payload:u32). Symbol i of an encode
run gets seed base_seed + i mod 2^64.
"""

from __future__ import annotations

import argparse
import math
import os
import secrets
import struct
import sys
from pathlib import Path

import numpy as np

from . import channel as chan
from . import fixtures
from .gprs import Scheme
from .lt import WIRE, WIRE_BYTES, EncodedSymbol, LtDecoder, LtEncoder
from .pipeline import PipelineConfig, run_session, write_trace_csv
from .rng import MASK64
from .soliton import build_distribution
from .sweep import SweepConfig, run_sweep, write_outputs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_DECODE = 4

MAGIC = b"LTSYM001"
HEADER = struct.Struct(">QddQQ")

ENV_PREFIX = "LTLINK_"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_config_file(path: str, known: set[str]) -> dict[str, str]:
    values: dict[str, str] = {}
    unknown: list[str] = []
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read config file: {e}", EXIT_CONFIG) from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key = value", EXIT_CONFIG)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            unknown.append(key)
        values[key] = value
    if unknown:
        raise CliError(
            f"{path}: unknown config keys: {', '.join(sorted(unknown))}; "
            f"valid keys: {', '.join(sorted(known))}",
            EXIT_CONFIG,
        )
    return values


def _resolve(args, keys: dict[str, object], config_attr: str = "config") -> dict:
    """Layer flag > env > file > default for each key in keys."""
    file_values: dict[str, str] = {}
    path = getattr(args, config_attr, None)
    if path:
        file_values = _read_config_file(path, set(keys))
    resolved = {}
    for key, default in keys.items():
        flag = getattr(args, key, None)
        env = os.environ.get(ENV_PREFIX + key.upper())
        if flag is not None:
            resolved[key] = flag
        elif env is not None:
            resolved[key] = _convert(key, env, default)
        elif key in file_values:
            resolved[key] = _convert(key, file_values[key], default)
        else:
            resolved[key] = default
    return resolved


# keys whose default (None) does not reveal their type
_TYPED_KEYS = {
    "seed": lambda t: int(t, 0),
    "trace": str,
}


def _convert(key: str, text: str, default):
    try:
        if key in _TYPED_KEYS:
            return _TYPED_KEYS[key](text)
        if key == "sir_points":
            return tuple(float(v) for v in text.split(","))
        if key == "schemes":
            return tuple(Scheme.parse(v) for v in text.split(","))
        if key == "scheme":
            return Scheme.parse(text)
        if isinstance(default, bool):
            return text.strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(text, 0)
        if isinstance(default, float):
            return float(text)
        return text
    except ValueError as e:
        raise CliError(f"bad value for {key}: {e}", EXIT_CONFIG) from None


def _write_config_log(target: Path, resolved: dict) -> None:
    lines = [f"{key} = {_render_value(v)}" for key, v in sorted(resolved.items())]
    target.write_text("\n".join(lines) + "\n")


def _render_value(v) -> str:
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    return str(v)


def _pick_seed(value: int | None) -> int:
    """Explicit seed, or a fresh one that the config log will record."""
    if value is not None:
        return value & MASK64
    return secrets.randbits(63)


def _make_model(kind: str, sir_db: float, p: float, coherence: int, trace: str | None):
    if kind == "awgn":
        return chan.Awgn(sir_db)
    if kind == "fading":
        return chan.CorrelatedFading(sir_db, coherence)
    if kind == "bsc":
        return chan.Bsc(p)
    if kind == "trace":
        if not trace:
            raise CliError("channel kind 'trace' needs --trace FILE", EXIT_CONFIG)
        return chan.TraceDriven(trace)
    raise CliError(f"unknown channel kind {kind!r}", EXIT_CONFIG)


# ---------------------------------------------------------------- encode

_ENCODE_KEYS = dict(c=0.1, delta=0.5, k=0, seed=None, overhead=0.2, count=0, out="")


def cmd_encode(args) -> int:
    resolved = _resolve(args, _ENCODE_KEYS)
    data = Path(args.input).read_bytes()
    if not data:
        raise CliError("input file is empty; nothing to frame (k would be 0)", EXIT_CONFIG)
    k = math.ceil(len(data) / 4)
    if resolved["k"] and resolved["k"] != k:
        raise CliError(
            f"--k {resolved['k']} contradicts input framing: {len(data)} bytes "
            f"is k={k} 32-bit symbols",
            EXIT_CONFIG,
        )
    resolved["k"] = k
    seed = _pick_seed(resolved["seed"])
    resolved["seed"] = seed
    count = resolved["count"] or math.ceil((1.0 + resolved["overhead"]) * k)

    padded = data + b"\x00" * (4 * k - len(data))
    words = np.frombuffer(padded, dtype=">u4").astype(np.uint32)
    dist = build_distribution(k, resolved["c"], resolved["delta"])
    encoder = LtEncoder(words, dist)

    out = Path(resolved["out"] or (args.input + ".lts"))
    with open(out, "wb") as fh:
        fh.write(MAGIC)
        fh.write(HEADER.pack(k, resolved["c"], resolved["delta"], len(data), seed))
        for i in range(count):
            fh.write(encoder.symbol((seed + i) & MASK64).pack())
    _write_config_log(out.with_name(out.name + ".config.txt"), resolved)
    print(f"{out}: {count} symbols for k={k} (requested overhead {count / k - 1.0:.3f})")
    return EXIT_OK


# ---------------------------------------------------------------- decode

_DECODE_KEYS = dict(out="")


def cmd_decode(args) -> int:
    resolved = _resolve(args, _DECODE_KEYS)
    blob = Path(args.input).read_bytes()
    if len(blob) < len(MAGIC) + HEADER.size:
        raise CliError(f"{args.input}: too short for a symbol stream header", EXIT_PARSE)
    if blob[: len(MAGIC)] != MAGIC:
        raise CliError(f"{args.input}: bad magic; not a symbol stream", EXIT_PARSE)
    k, c, delta, orig_len, base_seed = HEADER.unpack_from(blob, len(MAGIC))
    body = blob[len(MAGIC) + HEADER.size :]
    if k == 0 or not 0.0 < delta < 1.0 or c <= 0.0 or orig_len > 4 * k:
        raise CliError(f"{args.input}: header fields out of range", EXIT_PARSE)
    if len(body) % WIRE_BYTES:
        raise CliError(
            f"{args.input}: truncated record ({len(body)} bytes is not a "
            f"multiple of {WIRE_BYTES})",
            EXIT_PARSE,
        )

    dist = build_distribution(k, c, delta)
    decoder = LtDecoder(dist)
    for off in range(0, len(body), WIRE_BYTES):
        seed, payload = WIRE.unpack_from(body, off)
        decoder.ingest(EncodedSymbol(seed=seed, payload=payload, degree=0))
        if decoder.complete:
            break

    recovered, consumed, ineff = decoder.progress()
    if not decoder.complete:
        print(
            f"decode failed: recovered {recovered}/{k} "
            f"({decoder.recovered_fraction():.3f}) from {consumed} symbols",
            file=sys.stderr,
        )
        return EXIT_DECODE

    out = Path(resolved["out"] or (str(args.input) + ".out"))
    out.write_bytes(decoder.message().astype(">u4").tobytes()[:orig_len])
    log = dict(resolved, k=k, c=c, delta=delta, seed=base_seed, input=str(args.input))
    _write_config_log(out.with_name(out.name + ".config.txt"), log)
    print(f"{out}: {orig_len} bytes, inefficiency {ineff:.4f} ({consumed} symbols for k={k})")
    return EXIT_OK


# ---------------------------------------------------------------- session

_SESSION_KEYS = dict(
    k=1021, c=0.1, delta=0.5, scheme=Scheme.CS2, sir=9.0, seed=None,
    max_overhead=0.5, channel="awgn", p=0.05, coherence_bits=114, trace=None, out=".",
)


def cmd_session(args) -> int:
    resolved = _resolve(args, _SESSION_KEYS)
    seed = _pick_seed(resolved["seed"])
    resolved["seed"] = seed
    model = _make_model(
        resolved["channel"], resolved["sir"], resolved["p"],
        resolved["coherence_bits"], resolved["trace"],
    )
    cfg = PipelineConfig(
        scheme=resolved["scheme"], model=model, k=resolved["k"],
        c=resolved["c"], delta=resolved["delta"], max_overhead=resolved["max_overhead"],
    )
    result = run_session(cfg, session_seed=seed)

    out = Path(resolved["out"])
    out.mkdir(parents=True, exist_ok=True)
    write_trace_csv(out / "session_trace.csv", result.trace)
    _write_config_log(out / "session_trace.csv.config.txt", resolved)

    if result.complete:
        print(
            f"complete: eps {100 * result.fountain_overhead:.2f}% "
            f"({result.tx_symbols} symbols for k={result.k}), total overhead "
            f"{100 * result.total_overhead:.2f}%, blocks "
            f"{result.blocks_accepted}/{result.blocks_sent}, max jump {result.max_jump}"
        )
        return EXIT_OK
    last = result.trace[-1] if result.trace else None
    frac = (last.recovered / result.k) if last else 0.0
    print(
        f"failed: recovered {frac:.3f} of k={result.k} after {result.tx_symbols} "
        f"transmitted symbols (budget exhausted)",
        file=sys.stderr,
    )
    return EXIT_DECODE


# ---------------------------------------------------------------- sweep

_SWEEP_KEYS = dict(
    sir_points=SweepConfig.sir_points, schemes=SweepConfig.schemes,
    trials=SweepConfig.trials, k=SweepConfig.k, c=SweepConfig.c,
    delta=SweepConfig.delta, max_overhead=SweepConfig.max_overhead,
    seed=None, channel=SweepConfig.channel_kind,
    coherence_bits=SweepConfig.coherence_bits, jobs=SweepConfig.jobs,
    trajectory_trials=SweepConfig.trajectory_trials, out=".",
)


def cmd_sweep(args) -> int:
    resolved = _resolve(args, _SWEEP_KEYS)
    seed = _pick_seed(resolved["seed"])
    resolved["seed"] = seed
    if resolved["channel"] not in ("awgn", "fading", "bsc"):
        raise CliError(f"sweep channel must be awgn, fading, or bsc, not {resolved['channel']!r}", EXIT_CONFIG)
    cfg = SweepConfig(
        sir_points=tuple(resolved["sir_points"]), schemes=tuple(resolved["schemes"]),
        trials=resolved["trials"], k=resolved["k"], c=resolved["c"],
        delta=resolved["delta"], max_overhead=resolved["max_overhead"],
        base_seed=seed, channel_kind=resolved["channel"],
        coherence_bits=resolved["coherence_bits"], jobs=resolved["jobs"],
        trajectory_trials=resolved["trajectory_trials"],
    )
    result = run_sweep(cfg)
    ov, tr = write_outputs(result, resolved["out"])
    _write_config_log(Path(resolved["out"]) / "sweep.config.txt", resolved)
    print(result.summary_table())
    print(f"wrote {ov} and {tr}")
    return EXIT_OK


# ---------------------------------------------------------------- fixtures

def cmd_fixtures(args) -> int:
    if args.action != "verify":
        raise CliError(f"unknown fixtures action {args.action!r}", EXIT_CONFIG)
    problems = fixtures.verify_all()
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return EXIT_CONFIG
    print("all fixtures verify")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _int_flag(text: str) -> int:
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltlink",
        description="Fountain-coded file transfer and radio-link overhead simulation.",
        epilog=(
            "Any settings key can also come from a config file (--config, "
            "key = value lines) or environment (LTLINK_<KEY>); flags win."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="file -> symbol stream")
    enc.add_argument("input")
    enc.add_argument("--config")
    enc.add_argument("--k", type=_int_flag, help="assert the symbol count implied by the file size")
    enc.add_argument("--c", type=float)
    enc.add_argument("--delta", type=float)
    enc.add_argument("--seed", type=_int_flag)
    enc.add_argument("--overhead", type=float, help="emit ceil((1+overhead)*k) symbols")
    enc.add_argument("--count", type=_int_flag, help="emit exactly this many symbols")
    enc.add_argument("--out")
    enc.set_defaults(func=cmd_encode)

    dec = sub.add_parser("decode", help="symbol stream -> file")
    dec.add_argument("input")
    dec.add_argument("--config")
    dec.add_argument("--out")
    dec.set_defaults(func=cmd_decode)

    ses = sub.add_parser("session", help="one message over the simulated link")
    ses.add_argument("--config")
    ses.add_argument("--k", type=_int_flag)
    ses.add_argument("--c", type=float)
    ses.add_argument("--delta", type=float)
    ses.add_argument("--scheme", type=Scheme.parse)
    ses.add_argument("--sir", type=float, dest="sir")
    ses.add_argument("--seed", type=_int_flag)
    ses.add_argument("--max-overhead", type=float, dest="max_overhead")
    ses.add_argument("--channel", choices=("awgn", "fading", "bsc", "trace"))
    ses.add_argument("--p", type=float, help="flip probability for the bsc channel")
    ses.add_argument("--coherence-bits", type=_int_flag, dest="coherence_bits")
    ses.add_argument("--trace", help="float32 soft-value file for the trace channel")
    ses.add_argument("--out")
    ses.set_defaults(func=cmd_session)

    swp = sub.add_parser("sweep", help="SIR x scheme grid -> CSVs")
    swp.add_argument("--config")
    swp.add_argument("--sir-points", dest="sir_points",
                     type=lambda t: tuple(float(v) for v in t.split(",")))
    swp.add_argument("--schemes",
                     type=lambda t: tuple(Scheme.parse(v) for v in t.split(",")))
    swp.add_argument("--trials", type=_int_flag)
    swp.add_argument("--k", type=_int_flag)
    swp.add_argument("--c", type=float)
    swp.add_argument("--delta", type=float)
    swp.add_argument("--max-overhead", type=float, dest="max_overhead")
    swp.add_argument("--seed", type=_int_flag)
    swp.add_argument("--channel", choices=("awgn", "fading", "bsc"))
    swp.add_argument("--coherence-bits", type=_int_flag, dest="coherence_bits")
    swp.add_argument("--jobs", type=_int_flag)
    swp.add_argument("--trajectory-trials", type=_int_flag, dest="trajectory_trials")
    swp.add_argument("--out")
    swp.set_defaults(func=cmd_sweep)

    fix = sub.add_parser("fixtures", help="integrity checks for frozen fixtures")
    fix.add_argument("action", choices=("verify",))
    fix.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
