"""Dense multipartite linear algebra for small quantum systems.

Subsystems are ordered left to right with the leftmost factor varying
slowest in the flattened index, i.e. ``|a b c>`` sits at
``(a * d_b + b) * d_c + c``.  The package-wide ordering is
ancilla, A, A', B, field.  Single-qubit bases are ordered (g, e), so
``|g> = [1, 0]`` and ``|e> = [0, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import NamedTuple, Sequence

import numpy as np

# Eigenvalues of the partial transpose above this (negative) threshold are
# treated as zero when accumulating negativity.
NEGATIVITY_CUTOFF = 1e-12

GROUND = np.array([1.0, 0.0], dtype=complex)
EXCITED = np.array([0.0, 1.0], dtype=complex)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MultipartiteOperator:
    """A square complex matrix acting on a tensor product of subsystems."""

    data: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        data = _frozen(self.data)
        dims = tuple(int(d) for d in self.dims)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {data.shape}")
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid subsystem dimensions {dims}")
        if prod(dims) != data.shape[0]:
            raise ValueError(f"dims {dims} do not match matrix dimension {data.shape[0]}")
        if not np.all(np.isfinite(data)):
            raise ValueError("operator has non-finite entries")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def dag(self) -> "MultipartiteOperator":
        return MultipartiteOperator(self.data.conj().T, self.dims)

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.data))))
        return bool(np.max(np.abs(self.data - self.data.conj().T)) <= tol * scale)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(_hermitian_part(self.data))

    def _check_same(self, other):
        if not isinstance(other, MultipartiteOperator):
            return NotImplemented
        if other.dims != self.dims:
            raise ValueError(f"dimension mismatch {self.dims} vs {other.dims}")
        return other

    def __matmul__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return MultipartiteOperator(self.data @ other.data, self.dims)

    def __add__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return MultipartiteOperator(self.data + other.data, self.dims)

    def __sub__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return MultipartiteOperator(self.data - other.data, self.dims)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return MultipartiteOperator(scalar * self.data, self.dims)

    __rmul__ = __mul__

    def __repr__(self):
        return f"MultipartiteOperator(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class DensityMatrix(MultipartiteOperator):
    """A validated quantum state: Hermitian, unit trace, positive semidefinite."""

    tol: float = field(default=1e-10)

    def __post_init__(self):
        super().__post_init__()
        if self.tol < 0:
            raise ValueError("tolerance must be non-negative")
        if not self.is_hermitian(self.tol):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(self.data)
        if abs(tr - 1.0) > self.tol:
            raise ValueError(f"density matrix trace {tr.real:.3e} differs from 1")
        lo = float(np.linalg.eigvalsh(_hermitian_part(self.data))[0])
        if lo < -self.tol:
            raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")

    @classmethod
    def from_operator(cls, op: MultipartiteOperator, tol: float = 1e-10) -> "DensityMatrix":
        return cls(op.data, op.dims, tol)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized state vector on a tensor product."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    tol: float = 1e-10

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        dims = tuple(int(d) for d in self.dims)
        if prod(dims) != amps.size:
            raise ValueError(f"dims {dims} do not match vector length {amps.size}")
        if abs(np.linalg.norm(amps) - 1.0) > self.tol:
            raise ValueError(f"state is not normalized (norm {np.linalg.norm(amps):.6g})")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes, dims) -> "PureState":
        v = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(v / np.linalg.norm(v), dims)

    def projector(self) -> DensityMatrix:
        v = self.amplitudes
        return DensityMatrix(np.outer(v, v.conj()), self.dims)

    def __repr__(self):
        return f"PureState(dims={self.dims})"


def _hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def operator(data, dims: Sequence[int] | None = None) -> MultipartiteOperator:
    """Wrap a matrix; a single subsystem is assumed when ``dims`` is omitted."""
    data = np.asarray(data, dtype=complex)
    return MultipartiteOperator(data, tuple(dims) if dims is not None else (data.shape[0],))


def identity(dims: Sequence[int]) -> MultipartiteOperator:
    return MultipartiteOperator(np.eye(prod(dims), dtype=complex), tuple(dims))


def tensor(a: MultipartiteOperator, b: MultipartiteOperator) -> MultipartiteOperator:
    return MultipartiteOperator(np.kron(a.data, b.data), a.dims + b.dims)


def tensor_all(*ops: MultipartiteOperator) -> MultipartiteOperator:
    out = ops[0]
    for op in ops[1:]:
        out = tensor(out, op)
    return out


def ket_tensor(*vectors) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vectors:
        out = np.kron(out, np.asarray(v, dtype=complex))
    return out


def _check_index(i: int, n: int):
    if not isinstance(i, (int, np.integer)) or not 0 <= i < n:
        raise ValueError(f"subsystem index {i!r} out of range for {n} subsystems")


def partial_trace_array(data: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Array-level partial trace; ``keep`` must be sorted and unique."""
    n = len(dims)
    t = data.reshape(tuple(dims) + tuple(dims))
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for i in range(n):
        if i not in keep:
            cols[i] = rows[i]
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    d = prod(dims[i] for i in keep)
    return np.einsum("".join(rows) + "".join(cols) + "->" + out, t).reshape(d, d)


def partial_trace(rho: MultipartiteOperator, keep) -> MultipartiteOperator:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems retain their original relative order.
    """
    keep = sorted(set(int(k) for k in keep)) if keep is not None else []
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    n = len(rho.dims)
    for k in keep:
        _check_index(k, n)
    if len(keep) == n:
        return rho
    data = partial_trace_array(rho.data, rho.dims, keep)
    return MultipartiteOperator(data, tuple(rho.dims[k] for k in keep))


def partial_transpose_array(data: np.ndarray, dims: Sequence[int], subsystem: int) -> np.ndarray:
    n = len(dims)
    t = data.reshape(tuple(dims) + tuple(dims))
    return np.swapaxes(t, subsystem, n + subsystem).reshape(data.shape)


def partial_transpose(rho: MultipartiteOperator, subsystem: int) -> MultipartiteOperator:
    _check_index(subsystem, len(rho.dims))
    return MultipartiteOperator(partial_transpose_array(rho.data, rho.dims, subsystem), rho.dims)


def negativity(rho: MultipartiteOperator, subsystem: int = 0) -> float:
    """Sum of magnitudes of the negative eigenvalues of the partial transpose.

    With this normalization a Bell pair has negativity 1/2.  The input only
    needs to be Hermitian, so perturbatively truncated states are accepted.
    """
    if not rho.is_hermitian(1e-10):
        raise ValueError("negativity requires a Hermitian operator")
    ev = partial_transpose(rho, subsystem).eigvalsh()
    neg = ev[ev < -NEGATIVITY_CUTOFF]
    return float(-neg.sum()) if neg.size else 0.0


def min_pt_eigenvalue(rho: MultipartiteOperator, subsystem: int = 0) -> float:
    return float(partial_transpose(rho, subsystem).eigvalsh()[0])


class Schmidt(NamedTuple):
    coefficients: np.ndarray  # p_i, descending, summing to 1
    left: np.ndarray  # columns are |psi_i>
    right: np.ndarray  # columns are |phi'_i>

    def reconstruct(self) -> np.ndarray:
        return np.einsum("i,ai,bi->ab", np.sqrt(self.coefficients), self.left, self.right).ravel()


def _phase_fix(v: np.ndarray) -> complex:
    """Unit phase that makes the first non-negligible component real positive."""
    idx = np.flatnonzero(np.abs(v) > 1e-12 * max(1.0, np.max(np.abs(v))))
    if idx.size == 0:
        return 1.0
    x = v[idx[0]]
    return x / abs(x)


def schmidt_decompose(psi: PureState) -> Schmidt:
    if len(psi.dims) != 2:
        raise ValueError(f"Schmidt decomposition needs two subsystems, got {len(psi.dims)}")
    c = psi.amplitudes.reshape(psi.dims)
    u, s, vh = np.linalg.svd(c)
    k = len(s)
    left = u[:, :k].copy()
    right = vh[:k, :].T.copy()
    for i in range(k):
        ph = _phase_fix(left[:, i])
        left[:, i] /= ph
        right[:, i] *= ph
    p = s**2
    p = p / p.sum()
    return Schmidt(p, left, right)


def pauli_in_basis(mu: int, phi_g, phi_e) -> np.ndarray:
    """sigma_mu written in the orthonormal basis (phi_g, phi_e).

    sigma_1 = |e><g| + |g><e|, sigma_2 = i(-|e><g| + |g><e|),
    sigma_3 = |e><e| - |g><g|.
    """
    g = np.asarray(phi_g, dtype=complex).ravel()
    e = np.asarray(phi_e, dtype=complex).ravel()
    eg = np.outer(e, g.conj())
    ge = np.outer(g, e.conj())
    if mu == 0:
        return np.outer(g, g.conj()) + np.outer(e, e.conj())
    if mu == 1:
        return eg + ge
    if mu == 2:
        return 1j * (ge - eg)
    if mu == 3:
        return np.outer(e, e.conj()) - np.outer(g, g.conj())
    raise ValueError(f"Pauli index must be 0..3, got {mu}")


def pauli(mu: int) -> np.ndarray:
    """sigma_mu in the energy eigenbasis (g, e)."""
    return pauli_in_basis(mu, GROUND, EXCITED)


def _vec(x) -> np.ndarray:
    if isinstance(x, PureState):
        return x.amplitudes
    return np.asarray(x, dtype=complex).ravel()


def check_orthonormal(vectors, tol: float = 1e-10):
    m = np.column_stack([_vec(v) for v in vectors])
    if np.max(np.abs(m.conj().T @ m - np.eye(m.shape[1]))) > tol:
        raise ValueError("basis vectors are not orthonormal")


def bell_basis(phi_g, phi_e) -> list[PureState]:
    """The four states (sigma_mu x 1)(|phi_g g> + |phi_e e>)/sqrt(2)."""
    g, e = _vec(phi_g), _vec(phi_e)
    if g.size != 2 or e.size != 2:
        raise ValueError("Bell basis is defined for qubits")
    check_orthonormal([g, e])
    phi0 = (np.kron(g, GROUND) + np.kron(e, EXCITED)) / np.sqrt(2)
    return [
        PureState(np.kron(pauli_in_basis(mu, g, e), np.eye(2)) @ phi0, (2, 2)) for mu in range(4)
    ]


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    d = prod(dims)
    return PureState.normalized(rng.standard_normal(d) + 1j * rng.standard_normal(d), dims)


def random_density_matrix(dims: Sequence[int], rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    d = prod(dims)
    k = rank or d
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, tuple(dims))


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (a + a.conj().T) / 2
