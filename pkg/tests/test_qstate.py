import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import index_partial_trace
from qtransfer import qstate as qs


def bell_projector():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return qs.DensityMatrix(np.outer(v, v), (2, 2))


class TestTypes:
    def test_operator_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            qs.MultipartiteOperator(np.eye(4), (2, 3))
        with pytest.raises(ValueError):
            qs.MultipartiteOperator(np.ones((2, 3)), (2,))
        with pytest.raises(ValueError):
            qs.MultipartiteOperator(np.array([[np.nan]]), (1,))

    def test_operator_is_read_only(self):
        op = qs.operator(np.eye(2))
        with pytest.raises(ValueError):
            op.data[0, 0] = 5

    def test_density_matrix_validation(self):
        with pytest.raises(ValueError, match="Hermitian"):
            qs.DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]), (2,))
        with pytest.raises(ValueError, match="trace"):
            qs.DensityMatrix(np.eye(2), (2,))
        with pytest.raises(ValueError, match="negative"):
            qs.DensityMatrix(np.diag([1.1, -0.1]), (2,))
        qs.DensityMatrix(np.diag([1 + 1e-12, -1e-12]), (2,))

    def test_pure_state_normalization(self):
        with pytest.raises(ValueError):
            qs.PureState([1, 1], (2,))
        s = qs.PureState.normalized([1, 1j], (2,))
        assert np.isclose(np.linalg.norm(s.amplitudes), 1)
        assert np.isclose(s.projector().trace(), 1)

    def test_arithmetic(self):
        a = qs.operator(qs.pauli(1))
        b = qs.operator(qs.pauli(3))
        assert np.allclose((a @ b).data, qs.pauli(1) @ qs.pauli(3))
        assert np.allclose((a + b - a).data, b.data)
        assert np.allclose((2 * a).data, 2 * qs.pauli(1))
        with pytest.raises(ValueError):
            a @ qs.identity((2, 2))


class TestPartialTrace:
    def test_product_recovers_factors(self, rng):
        a = qs.random_density_matrix((2,), rng)
        b = qs.random_density_matrix((3,), rng)
        ab = qs.tensor(a, b)
        assert np.allclose(qs.partial_trace(ab, [0]).data, a.data, atol=1e-14)
        assert np.allclose(qs.partial_trace(ab, [1]).data, b.data, atol=1e-14)

    def test_matches_index_loop_oracle(self, rng):
        dims = (2, 3, 2)
        rho = qs.random_density_matrix(dims, rng)
        for keep in ([0], [1], [2], [0, 2], [1, 2]):
            got = qs.partial_trace(rho, keep).data
            assert np.allclose(got, index_partial_trace(rho.data, dims, keep), atol=1e-14)

    def test_keep_order_is_sorted(self, rng):
        rho = qs.random_density_matrix((2, 3), rng)
        assert qs.partial_trace(rho, [1, 0]).dims == (2, 3)

    def test_invalid_keep(self, rng):
        rho = qs.random_density_matrix((2, 2), rng)
        with pytest.raises(ValueError):
            qs.partial_trace(rho, [])
        with pytest.raises(ValueError):
            qs.partial_trace(rho, [2])


class TestPartialTranspose:
    def test_bell_spectrum(self):
        w = np.linalg.eigvalsh(qs.partial_transpose(bell_projector(), 0).data)
        assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-14)

    def test_twice_is_identity(self, rng):
        rho = qs.random_density_matrix((2, 3), rng)
        for sub in (0, 1):
            back = qs.partial_transpose(qs.partial_transpose(rho, sub), sub)
            assert np.array_equal(back.data, rho.data)

    def test_preserves_trace_and_hermiticity(self, rng):
        rho = qs.random_density_matrix((3, 2), rng)
        pt = qs.partial_transpose(rho, 1)
        assert np.isclose(pt.trace(), 1)
        assert pt.is_hermitian(1e-14)

    def test_both_sides_have_same_spectrum(self, rng):
        rho = qs.random_density_matrix((2, 2), rng)
        w0 = qs.partial_transpose(rho, 0).eigvalsh()
        w1 = qs.partial_transpose(rho, 1).eigvalsh()
        assert np.allclose(w0, w1, atol=1e-14)

    def test_commutation_lemma(self, rng):
        # (O (1 x Y))^{T_1} = O^{T_1} (1 x Y), and likewise on the left
        for da, db in ((2, 2), (3, 2), (2, 4)):
            o = rng.standard_normal((da * db,) * 2) + 1j * rng.standard_normal((da * db,) * 2)
            y = rng.standard_normal((db, db)) + 1j * rng.standard_normal((db, db))
            iy = np.kron(np.eye(da), y)
            pt = lambda x: qs.partial_transpose_array(x, (da, db), 0)  # noqa: E731
            assert np.max(np.abs(pt(o @ iy) - pt(o) @ iy)) <= 1e-13
            assert np.max(np.abs(pt(iy @ o) - iy @ pt(o))) <= 1e-13


class TestNegativity:
    def test_bell_state(self):
        assert qs.negativity(bell_projector()) == pytest.approx(0.5, abs=1e-14)

    def test_product_state_is_zero(self, rng):
        rho = qs.tensor(qs.random_density_matrix((2,), rng), qs.random_density_matrix((2,), rng))
        assert qs.negativity(rho) == 0.0

    def test_werner(self):
        w = 0.5
        v = np.array([1, 0, 0, 1]) / np.sqrt(2)
        rho = qs.DensityMatrix(w * np.outer(v, v) + (1 - w) * np.eye(4) / 4, (2, 2))
        assert qs.negativity(rho) == pytest.approx(0.125, abs=1e-14)

    def test_rejects_non_hermitian(self):
        op = qs.MultipartiteOperator(np.array([[1, 1], [0, 0]]), (2,))
        with pytest.raises(ValueError):
            qs.negativity(qs.MultipartiteOperator(np.kron(op.data, np.eye(2)), (2, 2)))

    def test_cutoff_suppresses_noise(self):
        rho = qs.DensityMatrix(np.diag([0.5, 0.5, 0, 0]).astype(complex), (2, 2))
        noisy = qs.MultipartiteOperator(rho.data + np.diag([0, 0, -1e-13, 1e-13]), (2, 2))
        assert qs.negativity(noisy) == 0.0

    def test_local_unitary_invariance(self, rng):
        for _ in range(20):
            rho = qs.random_density_matrix((2, 2), rng, rank=2)
            u = np.kron(qs.random_unitary(2, rng), qs.random_unitary(2, rng))
            rotated = qs.DensityMatrix(u @ rho.data @ u.conj().T, (2, 2))
            assert abs(qs.negativity(rotated) - qs.negativity(rho)) <= 1e-10


class TestSchmidtAndBell:
    def test_known_state(self):
        p = 0.3
        psi = qs.PureState([np.sqrt(p), 0, 0, np.sqrt(1 - p)], (2, 2))
        s = qs.schmidt_decompose(psi)
        assert np.allclose(s.coefficients, [0.7, 0.3])

    def test_reconstruction(self, rng):
        for dims in ((2, 2), (3, 2), (2, 3)):
            psi = qs.random_pure_state(dims, rng)
            s = qs.schmidt_decompose(psi)
            assert np.allclose(s.reconstruct(), psi.amplitudes, atol=1e-12)
            assert np.isclose(s.coefficients.sum(), 1)
            assert np.all(np.diff(s.coefficients) <= 1e-15)

    def test_bell_basis_orthonormal_and_maximally_entangled(self, rng):
        u = qs.random_unitary(2, rng)
        states = qs.bell_basis(u[:, 0], u[:, 1])
        m = np.column_stack([b.amplitudes for b in states])
        assert np.max(np.abs(m.conj().T @ m - np.eye(4))) <= 1e-14
        for b in states:
            marg = qs.partial_trace(b.projector(), [1]).data
            assert np.allclose(marg, np.eye(2) / 2, atol=1e-14)

    def test_computational_bell_basis(self):
        states = qs.bell_basis(qs.GROUND, qs.EXCITED)
        r = 1 / np.sqrt(2)
        assert np.allclose(states[0].amplitudes, [r, 0, 0, r])
        assert np.allclose(np.abs(states[1].amplitudes), [0, r, r, 0])

    def test_bell_basis_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            qs.bell_basis([1, 0], [1, 1])

    def test_pauli_algebra(self):
        for mu in (1, 2, 3):
            assert np.allclose(qs.pauli(mu) @ qs.pauli(mu), np.eye(2))
        assert np.allclose(qs.pauli(3), np.diag([-1, 1]))
        assert np.allclose(qs.pauli(1) @ qs.pauli(2), 1j * qs.pauli(3))
        with pytest.raises(ValueError):
            qs.pauli(4)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_negativity_bounds(seed, dims):
    rng = np.random.default_rng(seed)
    rho = qs.random_density_matrix(dims, rng, rank=int(rng.integers(1, 4)))
    n = qs.negativity(rho)
    d = min(dims)
    assert 0 <= n <= (d - 1) / 2 + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partial_trace_preserves_positivity(seed):
    rng = np.random.default_rng(seed)
    rho = qs.random_density_matrix((2, 2, 2), rng)
    red = qs.partial_trace(rho, [0, 2])
    assert red.eigvalsh()[0] >= -1e-14
    assert np.isclose(red.trace(), 1)
