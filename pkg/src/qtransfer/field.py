"""Smeared vacuum two-point function and harvesting coefficients.

Inertial detectors with Gaussian switching exp(-(t - t0)^2 / 2T^2) and
normalized Gaussian smearing of width sigma couple to a free scalar field of
mass m in d + 1 dimensional Minkowski vacuum.  Natural units.

The momentum integral reduces to a radial one:

    W(tau, r) = int_0^inf dk rho_d(k) A_d(kr) exp(-i w_k tau) exp(-s k^2) / (2 w_k)

with s = (sigma_i^2 + sigma_j^2) / 2, radial measure rho_d and angular
factor A_d = sinc, J0, cos for d = 3, 2, 1.

L and M are computed as tau-integrals of a Gaussian switching overlap
against W, with the centre-of-time integral done in closed form.  Both
nested integrals use Gauss-Legendre rules whose node counts are doubled
until successive estimates agree; the last difference is reported as the
error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError
from .harvest import HarvestCoefficients
from .kernels import phase_sum


@dataclass(frozen=True)
class DetectorParams:
    label: str = "A"
    coupling: float = 0.1
    gap: float = 1.0
    position: tuple[float, ...] = (0.0, 0.0, 0.0)
    switching_center: float = 0.0
    switching_width: float = 1.0
    smearing_width: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", tuple(float(x) for x in np.atleast_1d(self.position)))
        if not self.switching_width > 0:
            raise ValueError(f"switching width must be positive, got {self.switching_width}")
        if self.smearing_width < 0:
            raise ValueError(f"smearing width must be non-negative, got {self.smearing_width}")
        if self.coupling < 0:
            raise ValueError(f"coupling must be non-negative, got {self.coupling}")

    def switching(self, t):
        return np.exp(-((np.asarray(t) - self.switching_center) ** 2) / (2 * self.switching_width**2))


@dataclass(frozen=True)
class FieldModel:
    dimension: int = 3
    mass: float = 0.0

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"spatial dimension must be 1, 2 or 3, got {self.dimension}")
        if self.mass < 0:
            raise ValueError(f"mass must be non-negative, got {self.mass}")
        if self.dimension == 1 and self.mass == 0:
            raise ValueError("massless field in 1+1 dimensions is infrared divergent")

    def omega(self, k):
        return np.sqrt(k * k + self.mass**2)


@dataclass(frozen=True)
class QuadratureConfig:
    k_max_multiplier: float = 8.0
    time_window_multiplier: float = 8.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    initial_nodes: int = 64
    max_nodes: int = 1 << 14

    def __post_init__(self):
        for name in ("k_max_multiplier", "time_window_multiplier", "rel_tol", "abs_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.initial_nodes < 2 or self.max_nodes < self.initial_nodes:
            raise ValueError("invalid node counts")

    def doubled_cutoffs(self) -> "QuadratureConfig":
        return replace(
            self,
            k_max_multiplier=2 * self.k_max_multiplier,
            time_window_multiplier=2 * self.time_window_multiplier,
        )


class QuadResult(NamedTuple):
    value: complex
    error: float


@lru_cache(maxsize=64)
def _legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a: float, b: float, n: int):
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1), half * w


def _separation(di: DetectorParams, dj: DetectorParams, model: FieldModel) -> float:
    xi = np.zeros(model.dimension)
    xj = np.zeros(model.dimension)
    pi, pj = np.asarray(di.position), np.asarray(dj.position)
    if pi.size > model.dimension or pj.size > model.dimension:
        raise ValueError(f"detector position has more than {model.dimension} components")
    xi[: pi.size] = pi
    xj[: pj.size] = pj
    return float(np.linalg.norm(xi - xj))


def radial_density(model: FieldModel, k, r: float):
    """rho_d(k) A_d(kr) / (2 w_k): the radial integrand of W without the
    oscillating time factor and the smearing damping."""
    k = np.asarray(k, dtype=float)
    w = model.omega(k)
    d = model.dimension
    if d == 3:
        ang = np.sinc(k * r / np.pi)
        return k * k / (2 * np.pi**2) * ang / (2 * w)
    if d == 2:
        return k / (2 * np.pi) * special.j0(k * r) / (2 * w)
    return np.cos(k * r) / np.pi / (2 * w)


def _smearing_exponent(di: DetectorParams, dj: DetectorParams) -> float:
    return 0.5 * (di.smearing_width**2 + dj.smearing_width**2)


def _converge(evaluate, n0: int, cfg: QuadratureConfig, what: str) -> QuadResult:
    n = max(2, min(n0, cfg.max_nodes // 2))  # leave room for one doubling
    prev = evaluate(n)
    err = math.inf
    while 2 * n <= cfg.max_nodes:
        n *= 2
        cur = evaluate(n)
        err = abs(cur - prev)
        if err <= max(cfg.abs_tol, cfg.rel_tol * abs(cur)):
            return QuadResult(complex(cur), float(err))
        prev = cur
    raise ConvergenceError(f"{what} did not converge with {n} nodes", err)


def _start_nodes(cfg: QuadratureConfig, *oscillations: float) -> int:
    # enough nodes to resolve the expected number of oscillations
    need = max(oscillations) / math.pi * 2 if oscillations else 0
    n = cfg.initial_nodes
    while n < need and 2 * n <= cfg.max_nodes:
        n *= 2
    return n


def smeared_wightman(
    model: FieldModel,
    det_i: DetectorParams,
    det_j: DetectorParams,
    t: float,
    t_prime: float,
    cfg: QuadratureConfig | None = None,
) -> QuadResult:
    """W(t, x_i; t', x_j) with both detectors' smearing folded in."""
    cfg = cfg or QuadratureConfig()
    s = _smearing_exponent(det_i, det_j)
    if s == 0:
        raise ValueError("pointlike detectors leave the Wightman function UV-undamped")
    r = _separation(det_i, det_j, model)
    tau = float(t - t_prime)
    kmax = cfg.k_max_multiplier / math.sqrt(s)

    def evaluate(n):
        k, w = gauss_legendre(0.0, kmax, n)
        c = w * radial_density(model, k, r) * np.exp(-s * k * k)
        return phase_sum(np.array([tau]), model.omega(k), c)[0]

    return _converge(evaluate, _start_nodes(cfg, kmax * (abs(tau) + r)), cfg, "Wightman radial integral")


def gaussian_overlap(a: float, var_a: float, b, var_b: float, delta: float):
    """int dt exp(-(t-a)^2/2var_a - (t-b)^2/2var_b - i delta t), vectorized in b."""
    b = np.asarray(b, dtype=float)
    tot = var_a + var_b
    v = var_a * var_b / tot
    mid = (a * var_b + b * var_a) / tot
    return np.sqrt(2 * np.pi * v) * np.exp(-((a - b) ** 2) / (2 * tot) - 0.5 * delta * delta * v - 1j * delta * mid)


def _l_kernel(di: DetectorParams, dj: DetectorParams, tau):
    """int dt chi_i(t) chi_j(t - tau) exp(-i W_i t + i W_j (t - tau))."""
    ti, tj = di.switching_center, dj.switching_center
    return np.exp(-1j * dj.gap * tau) * gaussian_overlap(
        ti, di.switching_width**2, tau + tj, dj.switching_width**2, di.gap - dj.gap
    )


def _m_kernel(da: DetectorParams, db: DetectorParams, tau):
    """Both time orderings of the pair-creation integrand at fixed t - t' = tau."""
    total_gap = -(da.gap + db.gap)
    k1 = np.exp(-1j * db.gap * tau) * gaussian_overlap(
        da.switching_center, da.switching_width**2, tau + db.switching_center, db.switching_width**2, total_gap
    )
    k2 = np.exp(-1j * da.gap * tau) * gaussian_overlap(
        db.switching_center, db.switching_width**2, tau + da.switching_center, da.switching_width**2, total_gap
    )
    return k1 + k2


def _k_cutoff(cfg: QuadratureConfig, damping: float, gaps: Sequence[float] = ()) -> float:
    shift = max([0.0] + [-g for g in gaps])
    return cfg.k_max_multiplier / math.sqrt(damping) + shift


def compute_L(
    model: FieldModel,
    det_i: DetectorParams,
    det_j: DetectorParams,
    cfg: QuadratureConfig | None = None,
) -> QuadResult:
    """lambda_i lambda_j int dt dt' chi_i chi_j exp(-i(W_i t - W_j t')) W(t, x_i; t', x_j)."""
    cfg = cfg or QuadratureConfig()
    lam = det_i.coupling * det_j.coupling
    if lam == 0:
        return QuadResult(0j, 0.0)
    r = _separation(det_i, det_j, model)
    s = _smearing_exponent(det_i, det_j)
    spread = math.hypot(det_i.switching_width, det_j.switching_width)
    kmax = _k_cutoff(cfg, s + 0.5 * spread**2, (det_i.gap, det_j.gap))
    centre = det_i.switching_center - det_j.switching_center
    half = cfg.time_window_multiplier * spread
    t_lo, t_hi = centre - half, centre + half
    tau_extent = max(abs(t_lo), abs(t_hi))

    def evaluate(n):
        k, wk = gauss_legendre(0.0, kmax, n)
        ck = wk * radial_density(model, k, r) * np.exp(-s * k * k)
        tau, wt = gauss_legendre(t_lo, t_hi, n)
        w_tau = phase_sum(tau, model.omega(k), ck)
        return lam * np.sum(wt * _l_kernel(det_i, det_j, tau) * w_tau)

    n0 = _start_nodes(cfg, kmax * (tau_extent + r), kmax * 2 * half)
    return _converge(evaluate, n0, cfg, "L quadrature")


def compute_M(
    model: FieldModel,
    det_a: DetectorParams,
    det_b: DetectorParams,
    cfg: QuadratureConfig | None = None,
) -> QuadResult:
    """-lambda_A lambda_B int dt int_{t'<t} dt' [both detector orderings]."""
    cfg = cfg or QuadratureConfig()
    lam = det_a.coupling * det_b.coupling
    if lam == 0:
        return QuadResult(0j, 0.0)
    s = _smearing_exponent(det_a, det_b)
    if s == 0:
        raise ValueError("M needs at least one smeared detector: the time-ordered integral is UV-undamped")
    r = _separation(det_a, det_b, model)
    spread = math.hypot(det_a.switching_width, det_b.switching_width)
    t_hi = abs(det_a.switching_center - det_b.switching_center) + cfg.time_window_multiplier * spread
    kmax = cfg.k_max_multiplier / math.sqrt(s)

    def evaluate(n):
        k, wk = gauss_legendre(0.0, kmax, n)
        ck = wk * radial_density(model, k, r) * np.exp(-s * k * k)
        tau, wt = gauss_legendre(0.0, t_hi, n)
        w_tau = phase_sum(tau, model.omega(k), ck)
        return -lam * np.sum(wt * _m_kernel(det_a, det_b, tau) * w_tau)

    n0 = _start_nodes(cfg, kmax * (t_hi + r))
    return _converge(evaluate, n0, cfg, "M quadrature")


def switching_transform(det: DetectorParams, a):
    """int dt chi(t) exp(-i a t) for the Gaussian switching."""
    a = np.asarray(a, dtype=float)
    T = det.switching_width
    return math.sqrt(2 * math.pi) * T * np.exp(-1j * a * det.switching_center - 0.5 * (a * T) ** 2)


def compute_L_reduced(
    model: FieldModel,
    det_i: DetectorParams,
    det_j: DetectorParams,
    cfg: QuadratureConfig | None = None,
) -> QuadResult:
    """L with both time integrals done analytically per momentum shell,
    leaving one adaptive k-integral (scipy QUADPACK).  Independent of the
    Gauss-Legendre machinery used by compute_L."""
    cfg = cfg or QuadratureConfig()
    lam = det_i.coupling * det_j.coupling
    if lam == 0:
        return QuadResult(0j, 0.0)
    r = _separation(det_i, det_j, model)
    s = _smearing_exponent(det_i, det_j)
    spread = math.hypot(det_i.switching_width, det_j.switching_width)
    kmax = _k_cutoff(cfg, s + 0.5 * spread**2, (det_i.gap, det_j.gap))

    def integrand(k):
        w = model.omega(k)
        return (
            radial_density(model, k, r)
            * np.exp(-s * k * k)
            * switching_transform(det_i, det_i.gap + w)
            * np.conj(switching_transform(det_j, det_j.gap + w))
        )

    opts = dict(epsabs=0.0, epsrel=1e-13, limit=2000)
    re, e_re = integrate.quad(lambda k: integrand(k).real, 0.0, kmax, **opts)
    im, e_im = integrate.quad(lambda k: integrand(k).imag, 0.0, kmax, **opts)
    return QuadResult(lam * complex(re, im), lam * math.hypot(e_re, e_im))


@dataclass(frozen=True)
class HarvestResult:
    coefficients: HarvestCoefficients
    errors: dict

    def to_dict(self) -> dict:
        out = self.coefficients.to_dict()
        out.update({f"{k}_err": v for k, v in self.errors.items()})
        return out


def harvesting_coefficients(
    model: FieldModel,
    det_a: DetectorParams,
    det_b: DetectorParams,
    cfg: QuadratureConfig | None = None,
) -> HarvestResult:
    """All four second-order coefficients with their quadrature error estimates."""
    l_aa = compute_L(model, det_a, det_a, cfg)
    l_bb = compute_L(model, det_b, det_b, cfg)
    l_ab = compute_L(model, det_a, det_b, cfg)
    m = compute_M(model, det_a, det_b, cfg)
    coeffs = HarvestCoefficients(l_aa.value.real, l_bb.value.real, l_ab.value, m.value)
    errors = {"L_AA": l_aa.error, "L_BB": l_bb.error, "L_AB": l_ab.error, "M": m.error}
    return HarvestResult(coeffs, errors)
