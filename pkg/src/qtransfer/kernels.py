"""Backend selection for the hot quadrature kernels.

The compiled extension is used when it imports; otherwise, or when
``QTRANSFER_PURE_PYTHON=1`` is set, the numpy fallback is used.
"""

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("QTRANSFER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


def phase_sum(x, y, c):
    """out[a] = sum_b c[b] exp(-i x[a] y[b]) for real x, y and complex c."""
    return _impl.phase_sum(
        np.ascontiguousarray(x, dtype=float),
        np.ascontiguousarray(y, dtype=float),
        np.ascontiguousarray(c, dtype=complex),
    )
