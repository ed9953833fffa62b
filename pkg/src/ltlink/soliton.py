"""Robust Soliton degree distribution for LT codes.

For k message symbols and free parameters c > 0 and delta in (0, 1):

    R      = c * ln(k/delta) * sqrt(k)
    rho(1) = 1/k,  rho(d) = 1/(d*(d-1))          for d = 2..k
    tau(d) = R/(d*k)                             for d = 1..spike-1
    tau(spike) = R * ln(R/delta) / k
    tau(d) = 0                                   for d > spike
    beta   = sum(rho + tau),   mu(d) = (rho(d) + tau(d)) / beta

The spike sits at k/R, which is rarely an integer; it is placed at
floor(k/R + 0.5) clamped to [1, k]. When R > k the tau band is empty and
the distribution degenerates to the Ideal Soliton rho alone. The spike
term is clamped at zero: ln(R/delta) goes negative for pathological
parameter choices (R < delta) and a probability mass cannot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """Tabulated degree distribution with a cumulative sampler.

    pmf[d-1] holds mu(d) for d = 1..k; cdf is its running sum.
    """

    k: int
    c: float
    delta: float
    R: float
    pmf: np.ndarray = field(repr=False)
    cdf: np.ndarray = field(repr=False)

    @property
    def spike(self) -> int | None:
        """Degree carrying the tau spike, or None in the R > k fallback."""
        if self.R > self.k:
            return None
        return min(max(int(math.floor(self.k / self.R + 0.5)), 1), self.k)


def build_distribution(k: int, c: float, delta: float) -> DegreeDistribution:
    """Build the normalized Robust Soliton table for (k, c, delta)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")

    R = c * math.log(k / delta) * math.sqrt(k)

    d = np.arange(1, k + 1, dtype=np.float64)
    rho = np.zeros(k)
    rho[0] = 1.0 / k
    if k > 1:
        rho[1:] = 1.0 / (d[1:] * (d[1:] - 1.0))

    tau = np.zeros(k)
    if R <= k:
        spike = min(max(int(math.floor(k / R + 0.5)), 1), k)
        tau[: spike - 1] = R / (d[: spike - 1] * k)
        tau[spike - 1] = max(R * math.log(R / delta) / k, 0.0)

    raw = rho + tau
    beta = math.fsum(raw)
    pmf = raw / beta
    cdf = np.cumsum(pmf)
    return DegreeDistribution(k=k, c=c, delta=delta, R=R, pmf=pmf, cdf=cdf)


def sample_degree(dist: DegreeDistribution, rng: SplitMix64) -> int:
    """Draw a degree in 1..k by right-bisection of the cumulative table.

    Consumes exactly one 64-bit draw; uniform input 0.0 maps to the lowest
    degree with nonzero mass.
    """
    u = rng.random()
    degree = int(np.searchsorted(dist.cdf, u, side="right")) + 1
    return min(degree, dist.k)
