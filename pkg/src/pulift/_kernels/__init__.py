"""Kernel backend selection.

The compiled Cython module is used when it imported cleanly; otherwise the
numpy fallback takes over.  Set ``PULIFT_DISABLE_EXT=1`` to force the
fallback (used by the parity tests and the benchmark).
"""

import os

from . import fallback

if os.environ.get("PULIFT_DISABLE_EXT"):
    _impl = fallback
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = fallback

COMPILED: bool = bool(getattr(_impl, "COMPILED", False))

topk_smallest = _impl.topk_smallest
hist_build = _impl.hist_build
apply_tree = _impl.apply_tree
