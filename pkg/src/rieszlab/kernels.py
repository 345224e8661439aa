"""Backend dispatch for the interpolation/accumulation hot loops.

The compiled extension is preferred when importable; set
``RIESZLAB_BACKEND=numpy`` or ``=compiled`` to force a choice.
"""

from __future__ import annotations

import os

from . import _kernels_np

_FORCED = os.environ.get("RIESZLAB_BACKEND", "").strip().lower()

if _FORCED not in ("", "numpy", "compiled"):
    raise ImportError(f"RIESZLAB_BACKEND must be 'numpy' or 'compiled', got {_FORCED!r}")

if _FORCED == "numpy":
    _impl = _kernels_np
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise
        _impl = _kernels_np
        BACKEND = "numpy"

multilinear_gather = _impl.multilinear_gather
shift_accumulate = _impl.shift_accumulate

__all__ = ["BACKEND", "multilinear_gather", "shift_accumulate"]
