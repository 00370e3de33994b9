"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba kernels are used when numba imports cleanly and the environment
variable ``ASYNCNDS_DISABLE_JIT`` is unset (or ``0``/``false``). Both paths
return bitwise-identical results; the fallback exists for platforms without
numba and as the reference the benchmark script compares against.

Every kernel assumes ``float64`` C-contiguous point arrays of shape
``(n, k)`` and ``int64`` ordinals.
"""

from __future__ import annotations

import os

from . import numpy_impl

_FLAG = "ASYNCNDS_DISABLE_JIT"


def _jit_requested() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    if not _jit_requested():
        raise ImportError("numba disabled by " + _FLAG)
    from . import numba_impl as _impl
    BACKEND = "numba"
except ImportError:
    _impl = numpy_impl
    BACKEND = "numpy"

any_dominates = _impl.any_dominates
dominated_mask = _impl.dominated_mask
nadir_candidates = _impl.nadir_candidates
rebuild_level = _impl.rebuild_level
build_level = _impl.build_level
crowding = _impl.crowding
helper_a_direct = _impl.helper_a_direct
helper_b_direct = _impl.helper_b_direct
sweep_a = _impl.sweep_a
sweep_b = _impl.sweep_b

__all__ = [
    "BACKEND",
    "any_dominates",
    "build_level",
    "crowding",
    "dominated_mask",
    "helper_a_direct",
    "helper_b_direct",
    "nadir_candidates",
    "rebuild_level",
    "sweep_a",
    "sweep_b",
]
