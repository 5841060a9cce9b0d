import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtransfer import teleport as tp
from qtransfer.harvest import HarvestCoefficients, harvested_negativity_2nd, resource_state
from qtransfer.qstate import (
    DensityMatrix,
    MultipartiteOperator,
    PureState,
    negativity,
    random_pure_state,
    random_unitary,
)

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


def bell_resource():
    return DensityMatrix(np.outer(BELL, BELL), (2, 2))


def random_coeffs(rng, scale=0.01):
    laa, lbb = rng.uniform(0, scale, 2)
    lab = rng.uniform(0, 1) * np.sqrt(laa * lbb) * np.exp(2j * np.pi * rng.uniform())
    m = rng.uniform(0, 2 * scale) * np.exp(2j * np.pi * rng.uniform())
    return HarvestCoefficients(laa, lbb, lab, m)


def input_state(p):
    return PureState([np.sqrt(p), 0, 0, np.sqrt(1 - p)], (2, 2))


def test_perfect_teleportation(rng):
    for _ in range(10):
        psi = random_pure_state((2, 2), rng)
        res = tp.teleport_channel(psi, bell_resource())
        assert np.allclose(res.outcome_probabilities, 0.25)
        assert np.linalg.norm(res.xi.data - np.outer(psi.amplitudes, psi.amplitudes.conj())) <= 1e-12


def test_perfect_teleportation_rotated_basis_and_qutrit_ancilla(rng):
    u = random_unitary(2, rng)
    psi = random_pure_state((3, 2), rng)
    # with a rotated measurement basis Bob needs corrections in that basis
    basis = (u[:, 0], u[:, 1])
    strat = tp.CorrectionStrategy(tp.Strategy.CUSTOM, unitaries=tuple(np.eye(2) for _ in range(4)))
    res = tp.teleport_channel(psi, bell_resource(), basis, strat)
    assert np.isclose(res.xi.trace(), 1)
    std = tp.teleport_channel(psi, bell_resource())
    assert np.linalg.norm(std.xi.data - np.outer(psi.amplitudes, psi.amplitudes.conj())) <= 1e-12


def test_product_resource_gives_zero(rng):
    rho = DensityMatrix(np.kron(np.diag([1, 0]), np.diag([0.3, 0.7])).astype(complex), (2, 2))
    res = tp.teleport_channel(input_state(0.5), rho)
    assert negativity(res.xi) == 0.0


def test_input_validation():
    with pytest.raises(ValueError):
        tp.teleport_channel(PureState([1, 0, 0], (3,)), bell_resource())
    with pytest.raises(ValueError):
        tp.xi_closed_form(1.5, HarvestCoefficients(0, 0, 0, 0), tp.Strategy.STANDARD)
    with pytest.raises(ValueError):
        tp.CorrectionStrategy(tp.Strategy.CUSTOM, unitaries=(np.eye(2),) * 3)
    with pytest.raises(ValueError):
        tp.CorrectionStrategy(tp.Strategy.CUSTOM, unitaries=(np.ones((2, 2)),) * 4)


def test_custom_strategy_has_no_closed_form(rng):
    strat = tp.CorrectionStrategy(tp.Strategy.CUSTOM, unitaries=tuple(tp.pauli(m) for m in range(4)))
    with pytest.raises(ValueError):
        tp.teleported_eigenvalue(0.5, random_coeffs(rng), strat)


@pytest.mark.parametrize("variant", ["standard", "phase_corrected"])
def test_closed_form_xi_equals_channel_on_raw_resource(rng, variant):
    for _ in range(20):
        c = random_coeffs(rng)
        p = rng.uniform()
        strat = tp.CorrectionStrategy.for_resource(variant, c)
        xi = tp.teleport_channel(input_state(p), resource_state(c), strategy=strat).xi
        assert np.max(np.abs(xi.data - tp.xi_closed_form(p, c, strat).data)) <= 1e-15


def test_eta_matches_brute_force_twirl(rng):
    for _ in range(20):
        c = random_coeffs(rng)
        for strat in (tp.CorrectionStrategy.standard(), tp.CorrectionStrategy.phase_corrected(c.phi)):
            eta = tp.eta_from_resource(c, strat).data
            assert np.max(np.abs(eta - tp.twirl(resource_state(c), strat))) <= 1e-16


def test_eta_inner_block_phase(rng):
    c = HarvestCoefficients(0.01, 0.01, 0.005j, 0.01j)
    eta = tp.eta_from_resource(c, tp.CorrectionStrategy.phase_corrected(np.pi / 2)).data
    # Re(L_AB e^{-i phi}) with phi = pi/2
    assert eta[1, 2] == pytest.approx(0.005)


def test_optimality_identity_examples():
    c = HarvestCoefficients(0.01, 0.01, 0.0, 0.02 * np.exp(0.7j))
    assert tp.teleported_negativity_2nd(0.5, c, tp.Strategy.PHASE_CORRECTED) == pytest.approx(
        harvested_negativity_2nd(c), abs=1e-15
    )
    assert tp.teleported_negativity_2nd(0.0, c, tp.Strategy.PHASE_CORRECTED) == 0.0


def test_standard_strategy_penalty():
    c = HarvestCoefficients(0.01, 0.01, 0.0, 0.02j)  # Re(M) = 0
    assert tp.teleported_negativity_2nd(0.5, c, tp.Strategy.STANDARD) == 0.0
    assert tp.teleported_negativity_2nd(0.5, c, tp.Strategy.PHASE_CORRECTED) > 0


def test_closed_form_negativity_matches_pt(rng):
    for _ in range(30):
        c = random_coeffs(rng)
        p = rng.uniform()
        for strat in ("standard", "phase_corrected"):
            xi = tp.xi_closed_form(p, c, strat)
            exact = negativity(MultipartiteOperator(xi.data, (2, 2)))
            assert abs(exact - tp.teleported_negativity_2nd(p, c, strat)) <= 2 * c.max_magnitude() ** 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_teleported_never_exceeds_harvested(seed, p):
    c = random_coeffs(np.random.default_rng(seed))
    for strat in ("standard", "phase_corrected"):
        assert tp.teleported_negativity_2nd(p, c, strat) <= harvested_negativity_2nd(c) + 1e-12
