"""Compiled and fallback kernels must agree bit-for-bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from ltlink import kernels
from ltlink.kernels import _ref
from ltlink.soliton import build_distribution


def test_backend_reports_identity():
    assert kernels.BACKEND in ("compiled", "fallback")


def test_fallback_env_forces_pure_python():
    code = (
        "from ltlink import kernels; import sys; "
        "sys.exit(0 if kernels.BACKEND == 'fallback' else 1)"
    )
    env = dict(os.environ, LTLINK_KERNELS="fallback")
    assert subprocess.run([sys.executable, "-c", code], env=env).returncode == 0


@pytest.mark.parametrize("k", [1, 8, 100, 1000])
def test_sample_neighbors_backends_agree(k):
    dist = build_distribution(k, 0.1, 0.5)
    for seed in (0, 1, 0xDEADBEEF, (1 << 64) - 1, 12345678901234567):
        a = kernels.sample_neighbors(seed, dist.cdf, k)
        b = _ref.sample_neighbors(seed, dist.cdf, k)
        assert a.dtype == b.dtype == np.int64
        assert (a == b).all(), f"seed {seed}"
        assert len(set(a.tolist())) == a.shape[0]
        assert (a >= 0).all() and (a < k).all()


def test_conv_encode_backends_agree():
    rng = np.random.default_rng(5)
    for n in (1, 2, 5, 100, 228, 294, 338):
        bits = rng.integers(0, 2, size=n, dtype=np.uint8)
        a = kernels.conv_encode(bits)
        b = _ref.conv_encode(bits)
        assert a.shape == (2 * n,)
        assert (a == b).all()


def test_conv_encode_impulse_response():
    # single 1 then zeros reads out the two generator tap patterns:
    # g0 = 1 + D^3 + D^4, g1 = 1 + D + D^3 + D^4
    bits = np.zeros(8, dtype=np.uint8)
    bits[0] = 1
    out = kernels.conv_encode(bits)
    g0 = out[0::2]
    g1 = out[1::2]
    assert g0.tolist() == [1, 0, 0, 1, 1, 0, 0, 0]
    assert g1.tolist() == [1, 1, 0, 1, 1, 0, 0, 0]


def test_conv_encode_is_linear():
    rng = np.random.default_rng(6)
    x = rng.integers(0, 2, size=64, dtype=np.uint8)
    y = rng.integers(0, 2, size=64, dtype=np.uint8)
    lhs = kernels.conv_encode(np.bitwise_xor(x, y))
    rhs = np.bitwise_xor(kernels.conv_encode(x), kernels.conv_encode(y))
    assert (lhs == rhs).all()


@pytest.mark.parametrize("terminated", [True, False])
def test_viterbi_backends_bit_identical(terminated):
    rng = np.random.default_rng(7)
    for trial in range(60):
        n = int(rng.integers(8, 200))
        soft = rng.normal(0.0, 1.0, size=2 * n)
        a = kernels.viterbi_rate_half(soft, terminated=terminated)
        b = _ref.viterbi_rate_half(soft, terminated=terminated)
        assert (a == b).all(), f"trial {trial}"


def test_viterbi_noiseless_round_trip():
    rng = np.random.default_rng(8)
    for trial in range(100):
        n = int(rng.integers(10, 300))
        info = rng.integers(0, 2, size=n, dtype=np.uint8)
        frame = np.concatenate([info, np.zeros(4, dtype=np.uint8)])
        coded = kernels.conv_encode(frame)
        soft = 2.0 * coded.astype(np.float64) - 1.0
        decoded = kernels.viterbi_rate_half(soft, terminated=True)
        assert (decoded[:n] == info).all()
        assert (decoded[n:] == 0).all()


def test_viterbi_corrects_scattered_errors():
    # a few flipped bits inside a long block stay correctable
    rng = np.random.default_rng(9)
    info = rng.integers(0, 2, size=200, dtype=np.uint8)
    frame = np.concatenate([info, np.zeros(4, dtype=np.uint8)])
    coded = kernels.conv_encode(frame)
    soft = 2.0 * coded.astype(np.float64) - 1.0
    for pos in (30, 150, 270, 390):
        soft[pos] = -soft[pos]
    decoded = kernels.viterbi_rate_half(soft, terminated=True)
    assert (decoded[:200] == info).all()


def test_viterbi_erasures_recoverable():
    # zeroed soft values model punctured positions; rate stays above 1/2
    rng = np.random.default_rng(10)
    info = rng.integers(0, 2, size=150, dtype=np.uint8)
    frame = np.concatenate([info, np.zeros(4, dtype=np.uint8)])
    coded = kernels.conv_encode(frame)
    soft = 2.0 * coded.astype(np.float64) - 1.0
    soft[1::4] = 0.0  # erase every other step's second output
    decoded = kernels.viterbi_rate_half(soft, terminated=True)
    assert (decoded[:150] == info).all()
