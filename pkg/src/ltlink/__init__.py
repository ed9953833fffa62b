"""LT fountain codec and GPRS-style radio link simulator.

Subpackages/modules:

* ``rng``      -- pinned SplitMix64 generator (portable symbol identity)
* ``soliton``  -- Robust Soliton degree distribution and sampling
* ``lt``       -- LT encoder and incremental peeling decoder
* ``gprs``     -- CS-1..CS-4 block coding: BCS, convolutional code,
                  puncturing, interleaving, soft-decision Viterbi
* ``channel``  -- soft-output channel models (BSC, AWGN, fading, trace)
* ``pipeline`` -- RLC block transport: symbols -> blocks -> channel -> decode
* ``sweep``    -- Monte-Carlo overhead sweeps and CSV reporting
* ``cli``      -- command-line front door
* ``kernels``  -- compiled hot loops with a pure-Python/numpy fallback
"""

__version__ = "0.1.0"
