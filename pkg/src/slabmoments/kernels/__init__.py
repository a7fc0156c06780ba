"""Backend selection for the closure hot-loop kernels.

The compiled Cython extension is preferred when available; the numpy
fallback is formula-for-formula identical.  Force a backend with
``SLABMOMENTS_KERNELS=python`` or ``=compiled``.
"""

import os

from . import _ref

_requested = os.environ.get("SLABMOMENTS_KERNELS", "auto")

if _requested == "python":
    _impl = _ref
else:
    try:
        from . import _fast as _impl
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _ref

BACKEND = _impl.BACKEND
kershaw_next = _impl.kershaw_next

__all__ = ["BACKEND", "kershaw_next"]
