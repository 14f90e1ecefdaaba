"""Kernel backend selection.

The compiled extension is preferred when present; set QCANET_PURE_PYTHON=1
to force the numpy fallback. Both backends expose the same in-place
primitives and are cross-checked in the test suite.
"""

from __future__ import annotations

import os

from . import _numpy_kernels

if os.environ.get("QCANET_PURE_PYTHON"):
    _impl = _numpy_kernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _numpy_kernels

BACKEND: str = _impl.BACKEND
apply_matrix = _impl.apply_matrix
apply_update_interior = _impl.apply_update_interior
apply_update_left = _impl.apply_update_left
apply_update_right = _impl.apply_update_right
damping_sweep = _impl.damping_sweep

__all__ = [
    "BACKEND",
    "apply_matrix",
    "apply_update_interior",
    "apply_update_left",
    "apply_update_right",
    "damping_sweep",
]
