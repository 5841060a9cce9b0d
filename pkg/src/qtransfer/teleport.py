"""Teleportation of ancilla entanglement through a noisy A'B resource.

Subsystem order for the full protocol is (ancilla, A, A', B).  Alice
measures AA' in the Bell basis built on (phi_g, phi_e); Bob applies u_mu
to B.  The Pauli operators on B and on A' are taken in the energy
eigenbasis (g, e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .harvest import HarvestCoefficients, resource_state
from .qstate import (
    DensityMatrix,
    MultipartiteOperator,
    PureState,
    bell_basis,
    partial_trace_array,
    pauli,
)


class Strategy(str, Enum):
    STANDARD = "standard"
    PHASE_CORRECTED = "phase_corrected"
    CUSTOM = "custom"


@dataclass(frozen=True)
class CorrectionStrategy:
    """Bob's conditional unitaries u_mu.

    standard: u_mu = sigma_mu.  phase_corrected: u_mu = sigma_mu v_B(phi)
    with v_B = exp(-i phi)|e><e| + |g><g|.  custom: four explicit unitaries.
    """

    variant: Strategy = Strategy.STANDARD
    phi: float = 0.0
    unitaries: tuple = field(default=(), repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variant", Strategy(self.variant))
        if self.variant is Strategy.CUSTOM:
            us = tuple(np.asarray(u, dtype=complex) for u in self.unitaries)
            if len(us) != 4:
                raise ValueError("custom strategy needs four unitaries")
            for u in us:
                if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-12:
                    raise ValueError("custom correction is not a 2x2 unitary")
            object.__setattr__(self, "unitaries", us)

    @classmethod
    def standard(cls) -> "CorrectionStrategy":
        return cls(Strategy.STANDARD)

    @classmethod
    def phase_corrected(cls, phi: float) -> "CorrectionStrategy":
        return cls(Strategy.PHASE_CORRECTED, float(phi))

    @classmethod
    def for_resource(cls, variant, c: HarvestCoefficients) -> "CorrectionStrategy":
        """Strategy whose phase is read off the resource's M."""
        variant = Strategy(variant)
        if variant is Strategy.PHASE_CORRECTED:
            return cls.phase_corrected(c.phi)
        return cls(variant)

    def correction(self, mu: int) -> np.ndarray:
        if self.variant is Strategy.CUSTOM:
            return self.unitaries[mu]
        if self.variant is Strategy.PHASE_CORRECTED:
            return pauli(mu) @ phase_unitary(self.phi)
        return pauli(mu)


def phase_unitary(phi: float) -> np.ndarray:
    return np.diag([1.0, np.exp(-1j * phi)])


@dataclass(frozen=True)
class TeleportResult:
    xi: MultipartiteOperator  # a DensityMatrix whenever the resource was one
    outcome_probabilities: np.ndarray
    per_outcome_states: tuple  # normalized corrected states, None for null outcomes


def bell_measurement_ops(phi_g, phi_e, ancilla_dim: int = 2) -> list[MultipartiteOperator]:
    """M_mu = 1_ancilla x |Phi_mu><Phi_mu|_{AA'} x 1_B."""
    dims = (ancilla_dim, 2, 2, 2)
    ops = []
    for b in bell_basis(phi_g, phi_e):
        proj = np.outer(b.amplitudes, b.amplitudes.conj())
        ops.append(MultipartiteOperator(np.kron(np.kron(np.eye(ancilla_dim), proj), np.eye(2)), dims))
    return ops


def _unitary_on_b(u: np.ndarray, ancilla_dim: int) -> np.ndarray:
    return np.kron(np.eye(ancilla_dim), u)


def teleport_channel(
    input_state: PureState,
    resource: MultipartiteOperator,
    basis: Sequence = None,
    strategy: CorrectionStrategy | None = None,
) -> TeleportResult:
    """Run the measure / communicate / correct protocol exactly.

    ``resource`` may be any Hermitian unit-trace operator on A'B; a
    DensityMatrix gives a physical channel, the raw truncated resource
    state gives the closed-form algebra exactly.
    """
    if len(input_state.dims) != 2 or input_state.dims[1] != 2:
        raise ValueError(f"input must live on ancilla x qubit, got dims {input_state.dims}")
    if resource.dims != (2, 2):
        raise ValueError(f"resource must be a two-qubit operator, got dims {resource.dims}")
    basis = basis if basis is not None else (np.array([1, 0]), np.array([0, 1]))
    strategy = strategy or CorrectionStrategy.standard()
    da = input_state.dims[0]
    dims = (da, 2, 2, 2)
    v = input_state.amplitudes
    total = np.kron(np.outer(v, v.conj()), resource.data)

    # only a genuine state is promised a genuine state back
    wrap = (lambda a: DensityMatrix(a, (da, 2), tol=1e-8)) if isinstance(resource, DensityMatrix) else (
        lambda a: MultipartiteOperator(a, (da, 2))
    )
    probs = np.zeros(4)
    xi = np.zeros((2 * da, 2 * da), dtype=complex)
    states = []
    for mu, m in enumerate(bell_measurement_ops(*basis, ancilla_dim=da)):
        post = partial_trace_array(m.data @ total @ m.data, dims, [0, 3])
        uu = _unitary_on_b(strategy.correction(mu), da)
        post = uu @ post @ uu.conj().T
        pr = float(np.trace(post).real)
        probs[mu] = pr
        xi += post
        states.append(wrap(post / pr) if pr > 1e-14 else None)
    return TeleportResult(wrap(xi), probs, tuple(states))


def twirl(rho: MultipartiteOperator, strategy: CorrectionStrategy) -> np.ndarray:
    """(1/4) sum_mu (sigma_mu x u_mu) rho (sigma_mu x u_mu)^dagger."""
    out = np.zeros((4, 4), dtype=complex)
    for mu in range(4):
        k = np.kron(pauli(mu), strategy.correction(mu))
        out += k @ rho.data @ k.conj().T
    return out / 4


def _phase_of(strategy, c: HarvestCoefficients) -> tuple[Strategy, float]:
    if isinstance(strategy, CorrectionStrategy):
        variant = strategy.variant
        phi = strategy.phi
    else:
        variant = Strategy(strategy)
        phi = c.phi
    if variant is Strategy.STANDARD:
        phi = 0.0
    return variant, phi


def eta_from_resource(c: HarvestCoefficients, strategy: CorrectionStrategy | Strategy | str) -> MultipartiteOperator:
    """Closed-form twirled resource for the standard and phase-corrected rules.

    With phase phi removed by v_B (phi = 0 for the standard rule) the twirl
    keeps Re(M e^{-i phi}) on the gg/ee corners and Re(L_AB e^{-i phi}) on the
    ge/eg block.  A bare variant name takes phi = arg(M).
    """
    variant, phi = _phase_of(strategy, c)
    if variant is Strategy.CUSTOM:
        return MultipartiteOperator(twirl(resource_state(c), strategy), (2, 2))
    rot = np.exp(-1j * phi)
    corner = (c.M * rot).real
    inner = (c.L_AB * rot).real
    lm = c.L_mean
    eta = np.array(
        [
            [0.5 - lm, 0, 0, corner],
            [0, lm, inner, 0],
            [0, inner, lm, 0],
            [corner, 0, 0, 0.5 - lm],
        ],
        dtype=complex,
    )
    return MultipartiteOperator(eta, (2, 2))


def _check_p(p: float):
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"Schmidt weight p must lie in [0, 1], got {p}")


def xi_closed_form(
    p: float,
    c: HarvestCoefficients,
    strategy: CorrectionStrategy | Strategy | str,
    ancilla_basis: np.ndarray | None = None,
) -> MultipartiteOperator:
    """Teleported ancilla-B state for an input sqrt(p)|psi_g phi_g> + sqrt(1-p)|psi_e phi_e>
    whose A-side Schmidt basis equals the Bell-measurement basis.

    ``ancilla_basis`` holds |psi_g>, |psi_e> as columns (identity by default).
    """
    _check_p(p)
    eta = eta_from_resource(c, strategy).data.reshape(2, 2, 2, 2)  # (a', b, a'', b')
    psi = np.eye(2, dtype=complex) if ancilla_basis is None else np.asarray(ancilla_basis, dtype=complex)
    sq = np.sqrt([p, 1 - p])
    xi = np.zeros((2 * psi.shape[0], 2 * psi.shape[0]), dtype=complex)
    for i in range(2):
        for j in range(2):
            anc = np.outer(psi[:, i], psi[:, j].conj())
            xi += 2 * sq[i] * sq[j] * np.kron(anc, eta[i, :, j, :])
    return MultipartiteOperator(xi, (psi.shape[0], 2))


def teleported_eigenvalue(p: float, c: HarvestCoefficients, strategy) -> float:
    """The possibly negative partial-transpose eigenvalue of the teleported state."""
    _check_p(p)
    variant, phi = _phase_of(strategy, c)
    if variant is Strategy.CUSTOM:
        raise ValueError("closed-form teleported negativity exists only for standard and phase-corrected corrections")
    if variant is Strategy.PHASE_CORRECTED and phi == c.phi:
        m = abs(c.M)  # the correction removes arg(M) exactly
    else:
        m = (c.M * np.exp(-1j * phi)).real
    lm = c.L_mean
    q = 4 * p * (1 - p)
    return lm - math.sqrt(lm * lm * (1 - q) + q * m * m)


def teleported_negativity_2nd(p: float, c: HarvestCoefficients, strategy) -> float:
    """max(0, -E') for the phase-corrected rule, max(0, -E'') for the standard one.

    Assumes the Bell-measurement basis diagonalizes the input's A marginal.
    """
    return max(0.0, -teleported_eigenvalue(p, c, strategy))
