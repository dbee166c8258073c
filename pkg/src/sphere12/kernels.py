"""Kernel selection.

The compiled extension is used when it imports; setting ``SPHERE12_PURE=1``
forces the numpy fallback.  ``BACKEND`` names the active implementation.
"""

import os

from . import _kernels_py as py

if os.environ.get("SPHERE12_PURE", "") not in ("", "0"):
    _impl = py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = py

BACKEND = "compiled" if _impl is not py else "python"

min_separation = _impl.min_separation
min_separation_batch = _impl.min_separation_batch
softmin_grad = _impl.softmin_grad
