"""Backend selection for the hot kernels.

The compiled extension is preferred; set ``RLPWIDTH_PURE_PYTHON=1`` to force
the numpy fallback (useful for benchmarking and for platforms without a C
compiler).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("RLPWIDTH_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

splitmix_uint64 = _impl.splitmix_uint64
uniforms = _impl.uniforms
normals = _impl.normals
tail_second_moment = _impl.tail_second_moment

__all__ = ["BACKEND", "splitmix_uint64", "uniforms", "normals", "tail_second_moment"]
