# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: SplitMix64 neighbor sampling, rate-1/2 convolutional
encode, and the 16-state soft-decision Viterbi decoder.

Bit-for-bit equivalent to ``_ref.py`` (same draws, same float operation
order, same tie-breaking); built with -ffp-contract=off to keep the metric
sums identical to numpy's.
"""

import numpy as np

from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport calloc, malloc, free
from libc.math cimport INFINITY

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef double INV53 = 1.0 / 9007199254740992.0  # 2**-53


cdef inline uint64_t sm_next(uint64_t *state) nogil:
    cdef uint64_t z
    state[0] = state[0] + GAMMA
    z = state[0]
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


def sample_neighbors(object seed, double[::1] cdf, long k):
    """Regenerate an encoded symbol's neighbor set from its seed."""
    cdef uint64_t state = <uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef double u = <double> (sm_next(&state) >> 11) * INV53
    cdef long lo = 0, hi = k, mid, degree
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    degree = lo + 1
    if degree > k:
        degree = k

    out_arr = np.empty(degree, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef uint8_t *seen = <uint8_t *> calloc(k, sizeof(uint8_t))
    if seen == NULL:
        raise MemoryError()
    cdef uint64_t rem = ((<uint64_t> 0xFFFFFFFFFFFFFFFFULL % <uint64_t> k) + 1) % <uint64_t> k
    cdef uint64_t limit = (<uint64_t> 0) - rem  # wraps to 2**64 - rem; rem==0 -> accept all
    cdef uint64_t x
    cdef long idx, filled = 0
    try:
        while filled < degree:
            x = sm_next(&state)
            if rem != 0 and x >= limit:
                continue
            idx = <long> (x % <uint64_t> k)
            if not seen[idx]:
                seen[idx] = 1
                out[filled] = idx
                filled += 1
    finally:
        free(seen)
    return out_arr


def conv_encode(const uint8_t[::1] info):
    """Rate-1/2 convolutional encode; output interleaved [a0, b0, a1, b1, ...]."""
    cdef long n = info.shape[0]
    out_arr = np.empty(2 * n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef unsigned int reg = 0
    cdef unsigned int u, o0
    cdef long t
    for t in range(n):
        u = info[t]
        o0 = u ^ ((reg >> 2) & 1) ^ ((reg >> 3) & 1)
        out[2 * t] = <uint8_t> o0
        out[2 * t + 1] = <uint8_t> (o0 ^ (reg & 1))
        reg = ((reg << 1) | u) & 0xF
    return out_arr


def viterbi_rate_half(const double[::1] soft, bint terminated=True):
    """Soft-decision Viterbi decode of the rate-1/2 code (16 states)."""
    cdef long n = soft.shape[0] // 2
    bits_arr = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] bits = bits_arr
    if n == 0:
        return bits_arr

    # branch sign tables per successor state
    cdef double s0a[16]
    cdef double s1a[16]
    cdef double s0b[16]
    cdef double s1b[16]
    cdef int nxt, u, pred, out0, out1
    for nxt in range(16):
        u = nxt & 1
        pred = nxt >> 1
        out0 = u ^ ((pred >> 2) & 1) ^ ((pred >> 3) & 1)
        out1 = out0 ^ (pred & 1)
        s0a[nxt] = 2.0 * out0 - 1.0
        s1a[nxt] = 2.0 * out1 - 1.0
        pred = (nxt >> 1) | 8
        out0 = u ^ ((pred >> 2) & 1) ^ ((pred >> 3) & 1)
        out1 = out0 ^ (pred & 1)
        s0b[nxt] = 2.0 * out0 - 1.0
        s1b[nxt] = 2.0 * out1 - 1.0

    cdef uint8_t *back = <uint8_t *> malloc(n * 16)
    if back == NULL:
        raise MemoryError()
    cdef double pm[16]
    cdef double pm_new[16]
    cdef double y0, y1, cand_a, cand_b
    cdef long t
    cdef int s, state
    for s in range(16):
        pm[s] = -INFINITY
    pm[0] = 0.0
    try:
        for t in range(n):
            y0 = soft[2 * t]
            y1 = soft[2 * t + 1]
            for nxt in range(16):
                cand_a = pm[nxt >> 1] + (s0a[nxt] * y0 + s1a[nxt] * y1)
                cand_b = pm[(nxt >> 1) | 8] + (s0b[nxt] * y0 + s1b[nxt] * y1)
                if cand_b > cand_a:
                    pm_new[nxt] = cand_b
                    back[t * 16 + nxt] = 1
                else:
                    pm_new[nxt] = cand_a
                    back[t * 16 + nxt] = 0
            for s in range(16):
                pm[s] = pm_new[s]

        state = 0
        if not terminated:
            for s in range(1, 16):
                if pm[s] > pm[state]:
                    state = s
        for t in range(n - 1, -1, -1):
            bits[t] = <uint8_t> (state & 1)
            if back[t * 16 + state]:
                state = (state >> 1) | 8
            else:
                state = state >> 1
    finally:
        free(back)
    return bits_arr
