"""Pure numpy/Python reference implementations of the hot kernels.

The compiled extension in ``_core.pyx`` mirrors these bit-for-bit: same
SplitMix64 draws, same float operation order in the Viterbi metric (the
extension is built with FP contraction off), same tie-breaking. The test
suite asserts exact equality between the two backends.
"""

from __future__ import annotations

import numpy as np

from ..rng import MASK64, SplitMix64

# Convolutional code: rate 1/2, constraint length 5 (GSM 05.03 pair),
# G0 = 1 + D^3 + D^4, G1 = 1 + D + D^3 + D^4.
_N_STATES = 16

# Trellis tables indexed by successor state s' (4 bits, LSB = newest bit).
# Each s' has two predecessors p0 = s'>>1 and p1 = p0|8; the input bit on
# both branches is s'&1.


def _branch_signs():
    s0a = np.empty(_N_STATES)
    s1a = np.empty(_N_STATES)
    s0b = np.empty(_N_STATES)
    s1b = np.empty(_N_STATES)
    p0 = np.empty(_N_STATES, dtype=np.intp)
    p1 = np.empty(_N_STATES, dtype=np.intp)
    for nxt in range(_N_STATES):
        u = nxt & 1
        for which, pred in enumerate((nxt >> 1, (nxt >> 1) | 8)):
            out0 = u ^ ((pred >> 2) & 1) ^ ((pred >> 3) & 1)
            out1 = out0 ^ (pred & 1)
            if which == 0:
                p0[nxt] = pred
                s0a[nxt] = 2.0 * out0 - 1.0
                s1a[nxt] = 2.0 * out1 - 1.0
            else:
                p1[nxt] = pred
                s0b[nxt] = 2.0 * out0 - 1.0
                s1b[nxt] = 2.0 * out1 - 1.0
    return p0, p1, s0a, s1a, s0b, s1b


_P0, _P1, _S0A, _S1A, _S0B, _S1B = _branch_signs()


def sample_neighbors(seed: int, cdf: np.ndarray, k: int) -> np.ndarray:
    """Regenerate an encoded symbol's neighbor set from its seed.

    Draws one uniform for the degree (right-bisection of the cumulative
    table), then `degree` distinct uniform indices in [0, k) by rejection.
    Pure function of (seed, cdf, k); indices are in draw order.
    """
    gen = SplitMix64(seed)
    u = gen.random()
    degree = int(np.searchsorted(cdf, u, side="right")) + 1
    if degree > k:
        degree = k
    out = np.empty(degree, dtype=np.int64)
    seen = set()
    filled = 0
    while filled < degree:
        idx = gen.randbelow(k)
        if idx not in seen:
            seen.add(idx)
            out[filled] = idx
            filled += 1
    return out


def conv_encode(info: np.ndarray) -> np.ndarray:
    """Rate-1/2 convolutional encode; output interleaved [a0, b0, a1, b1, ...]."""
    info = np.asarray(info, dtype=np.uint8)
    n = info.shape[0]
    pad = np.concatenate([np.zeros(4, dtype=np.uint8), info])
    u0 = pad[4:]
    u1 = pad[3 : 3 + n]
    u3 = pad[1 : 1 + n]
    u4 = pad[:n]
    out = np.empty(2 * n, dtype=np.uint8)
    out[0::2] = u0 ^ u3 ^ u4
    out[1::2] = u0 ^ u1 ^ u3 ^ u4
    return out


def viterbi_rate_half(soft: np.ndarray, terminated: bool = True) -> np.ndarray:
    """Soft-decision Viterbi decode of the rate-1/2 code.

    `soft` holds 2n real values (sign = bipolar bit, magnitude = reliability,
    exact 0.0 = erasure). Maximizes the correlation metric. Starts in state 0;
    with `terminated` the traceback is forced back from state 0 (tail bits).
    Ties prefer the lower predecessor state / lower end state.
    """
    soft = np.asarray(soft, dtype=np.float64)
    n = soft.shape[0] // 2
    pm = np.full(_N_STATES, -np.inf)
    pm[0] = 0.0
    back = np.empty((n, _N_STATES), dtype=bool)
    for t in range(n):
        y0 = soft[2 * t]
        y1 = soft[2 * t + 1]
        cand_a = pm[_P0] + (_S0A * y0 + _S1A * y1)
        cand_b = pm[_P1] + (_S0B * y0 + _S1B * y1)
        choose_b = cand_b > cand_a
        back[t] = choose_b
        pm = np.where(choose_b, cand_b, cand_a)
    state = 0 if terminated else int(np.argmax(pm))
    bits = np.empty(n, dtype=np.uint8)
    for t in range(n - 1, -1, -1):
        bits[t] = state & 1
        state = (state >> 1) | 8 if back[t, state] else state >> 1
    return bits
