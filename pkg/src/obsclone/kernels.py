"""Backend selection for the no-go search kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` runs the same algorithm. Set
``OBSCLONE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("OBSCLONE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

nogo_objective = _impl.nogo_objective
nelder_mead = _impl.nelder_mead
isometry = _impl.isometry

__all__ = ["BACKEND", "nogo_objective", "nelder_mead", "isometry"]
