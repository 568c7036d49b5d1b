"""Construction-kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
mirror is the fallback.  Set ACOCLUST_PURE_PYTHON=1 to force the fallback
(useful for timing comparisons and for checking backend equivalence).
Both backends are bit-compatible, so the choice never changes results.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("ACOCLUST_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

construct_sweep = _impl.construct_sweep
BACKEND: str = _impl.BACKEND


def kernel_backend() -> str:
    """Name of the active backend: "compiled" or "python"."""
    return BACKEND
