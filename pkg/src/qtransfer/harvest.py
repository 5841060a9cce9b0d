"""Second-order two-detector state and its harvested negativity.

The detector pair (A', B) starts in |gg>.  To second order in the couplings
the reduced state in the basis (gg, ge, eg, ee) is fixed by four numbers:
the local excitation terms L_AA, L_BB, the cross term L_AB and the
pair-creation term M.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .qstate import DensityMatrix, MultipartiteOperator

PERTURBATIVE_WARN = 0.1


@dataclass(frozen=True)
class HarvestCoefficients:
    L_AA: float
    L_BB: float
    L_AB: complex
    M: complex

    def __post_init__(self):
        for name in ("L_AA", "L_BB"):
            v = complex(getattr(self, name))
            if abs(v.imag) > 1e-10 * max(1.0, abs(v.real)):
                raise ValueError(f"{name} must be real, got {v}")
            if v.real < 0:
                raise ValueError(f"{name} must be non-negative, got {v.real}")
            object.__setattr__(self, name, float(v.real))
        object.__setattr__(self, "L_AB", complex(self.L_AB))
        object.__setattr__(self, "M", complex(self.M))
        if max(self.L_AA, self.L_BB, abs(self.L_AB), abs(self.M)) > PERTURBATIVE_WARN:
            warnings.warn("harvesting coefficients above 0.1; second-order results may be unreliable", stacklevel=3)

    @property
    def phi(self) -> float:
        """Argument of M."""
        return math.atan2(self.M.imag, self.M.real)

    @property
    def L_mean(self) -> float:
        return 0.5 * (self.L_AA + self.L_BB)

    @property
    def cauchy_schwarz_ok(self) -> bool:
        return abs(self.L_AB) ** 2 <= self.L_AA * self.L_BB * (1 + 1e-8) + 1e-300

    @property
    def identical(self) -> bool:
        return abs(self.L_AA - self.L_BB) <= 1e-12 * max(self.L_AA, self.L_BB)

    def max_magnitude(self) -> float:
        return max(self.L_AA, self.L_BB, abs(self.L_AB), abs(self.M))

    def to_dict(self) -> dict:
        return {
            "L_AA": self.L_AA,
            "L_BB": self.L_BB,
            "L_AB_re": self.L_AB.real,
            "L_AB_im": self.L_AB.imag,
            "M_re": self.M.real,
            "M_im": self.M.imag,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HarvestCoefficients":
        return cls(
            float(d["L_AA"]),
            float(d["L_BB"]),
            complex(float(d.get("L_AB_re", 0.0)), float(d.get("L_AB_im", 0.0))),
            complex(float(d.get("M_re", 0.0)), float(d.get("M_im", 0.0))),
        )


def resource_state(c: HarvestCoefficients) -> MultipartiteOperator:
    """The truncated A'B density matrix.  It is Hermitian with unit trace but
    has an O(lambda^4) negative eigenvalue whenever M != 0."""
    rho = np.array(
        [
            [1 - c.L_AA - c.L_BB, 0, 0, np.conj(c.M)],
            [0, c.L_BB, c.L_AB, 0],
            [0, np.conj(c.L_AB), c.L_AA, 0],
            [c.M, 0, 0, 0],
        ],
        dtype=complex,
    )
    return MultipartiteOperator(rho, (2, 2))


def negative_eigenvalue(c: HarvestCoefficients) -> float:
    """The one partial-transpose eigenvalue that can be negative at second order."""
    return 0.5 * (c.L_AA + c.L_BB) - 0.5 * math.sqrt((c.L_AA - c.L_BB) ** 2 + 4 * abs(c.M) ** 2)


def harvested_negativity_2nd(c: HarvestCoefficients) -> float:
    return max(0.0, -negative_eigenvalue(c))


def psd_repair(rho: MultipartiteOperator, max_violation: float = 0.01) -> DensityMatrix:
    """Nearest PSD unit-trace matrix: clip negative eigenvalues, renormalize."""
    if not rho.is_hermitian(1e-10):
        raise ValueError("psd_repair needs a Hermitian matrix")
    if abs(rho.trace() - 1) > 1e-10:
        raise ValueError("psd_repair needs a unit-trace matrix")
    a = 0.5 * (rho.data + rho.data.conj().T)
    w, v = np.linalg.eigh(a)
    if w[0] < -max_violation:
        raise ValueError(f"matrix too far from PSD (min eigenvalue {w[0]:.3e})")
    if w[0] >= 0:
        return DensityMatrix(a, rho.dims)
    w = np.clip(w, 0.0, None)
    w /= w.sum()
    return DensityMatrix((v * w) @ v.conj().T, rho.dims)
