"""Pick the compiled kernels when available, else the NumPy fallback.

Set ``SHUFFLE_LAB_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pure_kernels as pure

compiled = None
if os.environ.get("SHUFFLE_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        compiled = None

kernels = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "numpy"

convolve_float = kernels.convolve_float
apply_swaps = kernels.apply_swaps
cover_update = kernels.cover_update
