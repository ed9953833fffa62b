"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot functions (neighbor sampling, convolutional encode,
soft Viterbi decode) on identical inputs for both backends and checks
that their outputs match bit for bit before reporting. Run directly:

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from ltlink.kernels import _ref
from ltlink.rng import SplitMix64, derive_seed
from ltlink.soliton import build_distribution

try:
    from ltlink.kernels import _core
except ImportError:
    _core = None


def _timer(fn, calls_per_round: int, rounds: int) -> float:
    """Best-of-rounds mean microseconds per call."""
    best = []
    for _ in range(rounds):
        t0 = time.perf_counter()
        fn()
        best.append((time.perf_counter() - t0) / calls_per_round)
    return statistics.median(best) * 1e6


def bench_sample_neighbors(impl, seeds, cdf, k):
    def run():
        for s in seeds:
            impl.sample_neighbors(s, cdf, k)

    return run


def bench_conv_encode(impl, infos):
    def run():
        for info in infos:
            impl.conv_encode(info)

    return run


def bench_viterbi(impl, softs):
    def run():
        for soft in softs:
            impl.viterbi_rate_half(soft, True)

    return run


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7, help="timing rounds per case")
    ap.add_argument("--seed", type=lambda t: int(t, 0), default=0xBE9C4, help="input seed")
    args = ap.parse_args()

    rng = SplitMix64(args.seed)
    dist = build_distribution(1021, 0.1, 0.5)
    seeds = [rng.next_u64() for _ in range(2000)]

    bit_rng = np.random.default_rng(derive_seed(args.seed, 1))
    infos = [bit_rng.integers(0, 2, size=228, dtype=np.uint8) for _ in range(200)]
    softs = []
    for info in infos[:60]:
        coded = _ref.conv_encode(info)
        noise = bit_rng.normal(0.0, 0.45, size=coded.shape[0])
        softs.append(np.where(coded == 1, 1.0, -1.0) + noise)

    cases = [
        ("sample_neighbors (k=1021)", bench_sample_neighbors, (seeds, dist.cdf, dist.k), len(seeds)),
        ("conv_encode (228 bits)", bench_conv_encode, (infos,), len(infos)),
        ("viterbi_rate_half (456 soft)", bench_viterbi, (softs,), len(softs)),
    ]

    backends = [("fallback", _ref)]
    if _core is not None:
        backends.insert(0, ("compiled", _core))
    else:
        print("compiled extension not built; timing fallback only\n")

    # equivalence first: a speedup claim is worthless if outputs differ
    if _core is not None:
        for s in seeds[:200]:
            a = _core.sample_neighbors(s, dist.cdf, dist.k)
            b = _ref.sample_neighbors(s, dist.cdf, dist.k)
            assert (np.asarray(a) == np.asarray(b)).all(), f"neighbor mismatch at seed {s:#x}"
        for info in infos[:50]:
            assert (np.asarray(_core.conv_encode(info)) == _ref.conv_encode(info)).all()
        for soft in softs[:20]:
            a = _core.viterbi_rate_half(soft, True)
            b = _ref.viterbi_rate_half(soft, True)
            assert (np.asarray(a) == np.asarray(b)).all(), "viterbi mismatch"
        print("backend outputs identical on benchmark inputs\n")

    width = max(len(name) for name, *_ in cases)
    header = f"{'kernel':<{width}}  " + "".join(f"{n:>12}" for n, _ in backends)
    if _core is not None:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, factory, extra, per_round in cases:
        row = f"{name:<{width}}  "
        times = {}
        for bname, impl in backends:
            us = _timer(factory(impl, *extra), per_round, args.repeat)
            times[bname] = us
            row += f"{us:>10.1f}us"
        if _core is not None:
            row += f"{times['fallback'] / times['compiled']:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
