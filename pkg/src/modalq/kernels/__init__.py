"""Hot loops: row reduction, batched rank and matrix products over GF(q).

The implementation is picked once at import from ``MODALQ_BACKEND``:
``numba`` (default, falls back to numpy when numba is missing) or
``numpy``. Both implementations stay importable for tests and benchmarks.
"""

import logging
import os

from . import _numpy
from ._numpy import v_add, v_inv, v_mul, v_neg

log = logging.getLogger(__name__)

_requested = os.environ.get("MODALQ_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"MODALQ_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

_impl = _numpy
if _requested == "numba":
    try:
        from . import _numba as _impl
    except ImportError:  # pragma: no cover - depends on environment
        log.warning("numba unavailable, using numpy kernels")

BACKEND = "numba" if _impl is not _numpy else "numpy"

rref = _impl.rref
batch_rank = _impl.batch_rank
matmul = _impl.matmul
stacked_inclusion = _impl.stacked_inclusion


def implementations():
    """Mapping of backend name to kernel module, for every importable backend."""
    out = {"numpy": _numpy}
    try:
        from . import _numba as nb
    except ImportError:  # pragma: no cover
        return out
    out["numba"] = nb
    return out


__all__ = [
    "BACKEND",
    "rref",
    "batch_rank",
    "matmul",
    "stacked_inclusion",
    "implementations",
    "v_add",
    "v_neg",
    "v_mul",
    "v_inv",
]
