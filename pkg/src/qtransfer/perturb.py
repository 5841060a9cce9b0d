"""Eigenvalue perturbation theory for Hermitian pencils S0 + t S1 + t^2 S2.

For an eigenvalue s0 of S0 with eigenprojector P, the first-order shifts are
the eigenvalues of P S1 P on range(P).  The second-order shifts come from

    K = P (S2 - S1 R S1) P,   R = sum_{s' != s0} P_{s'} / (s' - s0),

restricted to range(P).  When the first-order shifts split the eigenspace,
K is diagonalized separately inside each first-order cluster, which reduces
to the plain spectrum of K whenever the first-order shifts coincide (the
case relevant for the zero eigenvalue of a partially transposed state).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import MultipartiteOperator, operator

DEFAULT_TOL = 1e-9


def _arr(x) -> np.ndarray:
    return x.data if isinstance(x, MultipartiteOperator) else np.asarray(x, dtype=complex)


def _dims(x, n):
    return x.dims if isinstance(x, MultipartiteOperator) else (n,)


@dataclass(frozen=True)
class HermitianSeries:
    S0: MultipartiteOperator
    S1: MultipartiteOperator
    S2: MultipartiteOperator

    def __post_init__(self):
        ops = []
        for name in ("S0", "S1", "S2"):
            x = getattr(self, name)
            if not isinstance(x, MultipartiteOperator):
                x = operator(x)
            if not x.is_hermitian(1e-12):
                raise ValueError(f"{name} is not Hermitian")
            ops.append(x)
        if len({x.dim for x in ops}) != 1:
            raise ValueError("pencil terms have different dimensions")
        for name, x in zip(("S0", "S1", "S2"), ops):
            object.__setattr__(self, name, x)

    def at(self, t: float) -> np.ndarray:
        return self.S0.data + t * self.S1.data + t * t * self.S2.data


@dataclass(frozen=True)
class EigenCorrections:
    s0: float
    first_order: np.ndarray
    second_order: np.ndarray
    projector: MultipartiteOperator


def _eigh(a: np.ndarray):
    return np.linalg.eigh(0.5 * (a + a.conj().T))


def eigenspace_projector(S0, s0: float, tol: float = DEFAULT_TOL) -> MultipartiteOperator:
    a = _arr(S0)
    w, v = _eigh(a)
    sel = np.abs(w - s0) <= tol
    if not sel.any():
        raise ValueError(f"no eigenvalue within {tol:g} of {s0:g}")
    q = v[:, sel]
    return MultipartiteOperator(q @ q.conj().T, _dims(S0, a.shape[0]))


def range_basis(projector) -> np.ndarray:
    """Orthonormal basis (columns) of a projector's range."""
    w, v = _eigh(_arr(projector))
    return v[:, w > 0.5]


def reduced_resolvent(S0, s0: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """sum over eigenvalues s' with |s' - s0| > tol of P_{s'} / (s' - s0)."""
    w, v = _eigh(_arr(S0))
    sel = np.abs(w - s0) > tol
    return (v[:, sel] / (w[sel] - s0)) @ v[:, sel].conj().T


def second_order_operator(series: HermitianSeries, s0: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """P (S2 - S1 R S1) P on the full space."""
    p = eigenspace_projector(series.S0, s0, tol).data
    s1 = series.S1.data
    r = reduced_resolvent(series.S0, s0, tol)
    return p @ (series.S2.data - s1 @ r @ s1) @ p


def zero_eig_corrections(series: HermitianSeries, s0: float = 0.0, tol: float = DEFAULT_TOL) -> EigenCorrections:
    proj = eigenspace_projector(series.S0, s0, tol)
    q = range_basis(proj)
    s1 = series.S1.data
    k_full = second_order_operator(series, s0, tol)

    a1, u1 = _eigh(q.conj().T @ s1 @ q)
    k = u1.conj().T @ (q.conj().T @ k_full @ q) @ u1

    first, second = [], []
    # group first-order shifts into clusters and diagonalize K within each
    start = 0
    scale = max(1.0, float(np.max(np.abs(a1)))) if a1.size else 1.0
    while start < a1.size:
        stop = start + 1
        while stop < a1.size and a1[stop] - a1[stop - 1] <= tol * scale:
            stop += 1
        block = k[start:stop, start:stop]
        second.extend(np.linalg.eigvalsh(0.5 * (block + block.conj().T)))
        first.extend([a1[start:stop].mean()] * (stop - start))
        start = stop
    return EigenCorrections(float(s0), np.array(first), np.array(second), proj)


def predicted_spectrum(corr: EigenCorrections, t: float) -> np.ndarray:
    return np.sort(corr.s0 + t * corr.first_order + t * t * corr.second_order)


def exact_branch(series: HermitianSeries, corr: EigenCorrections, t: float) -> np.ndarray:
    """Exact eigenvalues of S(t) emanating from ``corr.s0`` (nearest ones)."""
    w = np.linalg.eigvalsh(0.5 * (series.at(t) + series.at(t).conj().T))
    m = corr.first_order.size
    idx = np.argsort(np.abs(w - corr.s0), kind="stable")[:m]
    return np.sort(w[idx])
