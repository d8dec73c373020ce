"""Permanent kernels with backend selection at import time.

The compiled Cython extension is preferred; the NumPy implementation is the
fallback when the extension was not built (or when the environment variable
``BOSONIC_MOMENTS_PURE_PYTHON`` is set to a non-empty value, which is how the
benchmark compares the two).
"""

import os

from . import _permanents_py

if os.environ.get("BOSONIC_MOMENTS_PURE_PYTHON"):
    _impl = _permanents_py
    BACKEND = "python"
else:
    try:
        from . import _permanents as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _permanents_py
        BACKEND = "python"

permanent = _impl.permanent
permanent_batch = _impl.permanent_batch

__all__ = ["BACKEND", "permanent", "permanent_batch"]
