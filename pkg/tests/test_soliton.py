"""Degree-distribution checks against independently scripted formulas."""

import math

import numpy as np
import pytest

from ltlink.rng import SplitMix64
from ltlink.soliton import build_distribution, sample_degree


def scripted_pmf(k: int, c: float, delta: float) -> list[float]:
    """Straight transcription of the defining formulas, scalar Python.

    Shares no code with soliton.build_distribution: plain loops, no
    numpy, fsum-free accumulation order.
    """
    R = c * math.log(k / delta) * math.sqrt(k)
    rho = [0.0] * (k + 1)
    rho[1] = 1.0 / k
    for d in range(2, k + 1):
        rho[d] = 1.0 / (d * (d - 1))
    tau = [0.0] * (k + 1)
    if R <= k:
        spike = int(math.floor(k / R + 0.5))
        spike = min(max(spike, 1), k)
        for d in range(1, spike):
            tau[d] = R / (d * k)
        tau[spike] = max(R * math.log(R / delta) / k, 0.0)
    beta = sum(rho[d] + tau[d] for d in range(1, k + 1))
    return [(rho[d] + tau[d]) / beta for d in range(1, k + 1)]


@pytest.mark.parametrize("k,c,delta", [(100, 0.1, 0.5), (1000, 0.1, 0.5), (1000, 0.03, 0.3)])
def test_matches_scripted_formulas(k, c, delta):
    dist = build_distribution(k, c, delta)
    want = scripted_pmf(k, c, delta)
    assert abs(dist.pmf.sum() - 1.0) < 1e-12
    for d in range(k):
        assert abs(dist.pmf[d] - want[d]) < 1e-12, f"d={d + 1}"


def test_spike_position_example():
    # k/R = 100/5.298... -> 18.87 -> rounds to 19
    dist = build_distribution(100, 0.1, 0.5)
    assert dist.spike == 19
    # spike adds mass: mu(19) well above both neighbors
    assert dist.pmf[18] > 3 * dist.pmf[17]
    assert dist.pmf[18] > 3 * dist.pmf[19]


def test_tau_zero_beyond_spike():
    k, c, delta = 100, 0.1, 0.5
    dist = build_distribution(k, c, delta)
    spike = dist.spike
    # beyond the spike only rho remains
    beta_ratio = dist.pmf[spike] * (spike + 1) * spike  # mu(d) * d(d-1) = 1/beta
    for d in range(spike + 1, k + 1):
        assert dist.pmf[d - 1] * d * (d - 1) == pytest.approx(beta_ratio, rel=1e-9)


def test_ideal_part_telescopes():
    # sum of rho over 1..k is exactly 1: 1/k + sum 1/(d(d-1)) telescopes
    k = 1000
    total = 1.0 / k + sum(1.0 / (d * (d - 1)) for d in range(2, k + 1))
    assert abs(total - 1.0) < 1e-12


def test_degenerate_k1():
    dist = build_distribution(1, 0.1, 0.5)
    assert dist.pmf.shape == (1,)
    assert dist.pmf[0] == 1.0
    gen = SplitMix64(3)
    assert sample_degree(dist, gen) == 1


def test_cdf_monotone_and_complete():
    dist = build_distribution(500, 0.1, 0.5)
    assert (np.diff(dist.cdf) >= 0).all()
    assert dist.cdf[-1] == pytest.approx(1.0, abs=1e-12)


def test_validation_errors():
    with pytest.raises(ValueError):
        build_distribution(0, 0.1, 0.5)
    with pytest.raises(ValueError):
        build_distribution(10, -0.1, 0.5)
    with pytest.raises(ValueError):
        build_distribution(10, 0.1, 1.5)


def test_sampled_degrees_match_pmf():
    # 10^6 draws; every degree with expected count >= 25 within 5 sigma
    k = 100
    dist = build_distribution(k, 0.1, 0.5)
    gen = SplitMix64(0xD157)
    n = 1_000_000
    counts = np.zeros(k + 1, dtype=np.int64)
    for _ in range(n):
        counts[sample_degree(dist, gen)] += 1
    for d in range(1, k + 1):
        expect = n * dist.pmf[d - 1]
        if expect < 25:
            continue
        sd = math.sqrt(expect * (1 - dist.pmf[d - 1]))
        assert abs(counts[d] - expect) < 5 * sd, f"degree {d}"


def test_sample_degree_range():
    dist = build_distribution(37, 0.1, 0.5)
    gen = SplitMix64(77)
    for _ in range(10_000):
        assert 1 <= sample_degree(dist, gen) <= 37
