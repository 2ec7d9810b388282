"""Selects the compute backend at import time.

The compiled extension (``hsicselect._core``) is preferred when it was
built; otherwise the NumPy implementation (``hsicselect._core_py``) is
used. Set the environment variable ``HSICSELECT_PURE_PYTHON=1`` to force
the NumPy backend even when the extension exists (useful for the
backend benchmark and for debugging).

Both backends compute identical quantities; switching them changes
speed, not results (beyond last-bit floating-point noise).
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("HSICSELECT_PURE_PYTHON"):
    _impl = _core_py
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _core_py

gaussian_candidate_scores = _impl.gaussian_candidate_scores
linear_candidate_scores = _impl.linear_candidate_scores
variance_row_sums = _impl.variance_row_sums


def backend_name() -> str:
    """Name of the active backend: ``"compiled"`` or ``"python"``."""
    return "python" if _impl is _core_py else "compiled"


def using_compiled_core() -> bool:
    return backend_name() == "compiled"
