"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``ORPROOFS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from orproofs import _kernels_py

if os.environ.get("ORPROOFS_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from orproofs import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

leaf_digests = _impl.leaf_digests
parent_level = _impl.parent_level
fold_path = _impl.fold_path
