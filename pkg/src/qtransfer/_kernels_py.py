"""Pure numpy implementation of the quadrature kernels."""

import numpy as np

_CHUNK = 1 << 20


def phase_sum(x, y, c):
    """out[a] = sum_b c[b] * exp(-i x[a] y[b])."""
    x = np.ascontiguousarray(x, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    c = np.ascontiguousarray(c, dtype=complex)
    if c.shape[0] != y.shape[0]:
        raise ValueError("coefficient length must match y")
    out = np.empty(x.shape[0], dtype=complex)
    rows = max(1, _CHUNK // max(1, y.shape[0]))
    for s in range(0, x.shape[0], rows):
        out[s : s + rows] = np.exp(-1j * np.outer(x[s : s + rows], y)) @ c
    return out
