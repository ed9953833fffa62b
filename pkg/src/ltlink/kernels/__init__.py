"""Hot-loop kernels with backend selection at import time.

Prefers the compiled Cython extension (``_core``); falls back to the pure
numpy/Python implementations in ``_ref`` when the extension is missing.
Set ``LTLINK_KERNELS=fallback`` to force the pure backend (used by the
benchmark and the equivalence tests). Both backends produce bit-identical
results.
"""

import os

from . import _ref

_forced = os.environ.get("LTLINK_KERNELS", "").strip().lower()

_impl = None
if _forced not in ("fallback", "py", "python"):
    try:
        from . import _core as _impl
    except ImportError:
        _impl = None

if _impl is None:
    _impl = _ref
    BACKEND = "fallback"
else:
    BACKEND = "compiled"

sample_neighbors = _impl.sample_neighbors
conv_encode = _impl.conv_encode
viterbi_rate_half = _impl.viterbi_rate_half
