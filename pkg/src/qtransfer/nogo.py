"""Direct transmission through a finite-dimensional intermediary.

The total system is ordered (ancilla, A, B, f).  Every interaction term is a
real switching profile times a fixed Hermitian product X (on A or B) x O (on
f); interaction-picture phases are folded into the profiles, so

    H(t) = lambda_A sum_k f_k(t) X_k x O_k + lambda_B sum_k g_k(t) Y_k x P_k.

Because each term factorizes, the first two Dyson terms reduce to scalar
time integrals J_k = int f_k and nested integrals I_kl = int dt f_k(t)
int_{-inf}^t f_l, times fixed operator products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from . import perturb
from .errors import ConvergenceError
from .qstate import (
    DensityMatrix,
    MultipartiteOperator,
    PureState,
    min_pt_eigenvalue,
    negativity,
    partial_trace_array,
    partial_transpose_array,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
)

DYSON_TOL = 1e-10
EVOLVE_TOL = 1e-10
ZERO_NEGATIVITY = 1e-12


@dataclass(frozen=True)
class SwitchingProfile:
    """exp(-(t - center)^2 / 2 width^2) * prod_i cos(frequencies[i] t + phases[i])."""

    center: float = 0.0
    width: float = 1.0
    frequencies: tuple[float, ...] = ()
    phases: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("switching width must be positive")
        freqs = tuple(float(x) for x in self.frequencies)
        phases = tuple(float(x) for x in self.phases) or (0.0,) * len(freqs)
        if len(phases) != len(freqs):
            raise ValueError("one phase per frequency is required")
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "phases", phases)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.exp(-((t - self.center) ** 2) / (2 * self.width**2))
        for nu, ph in zip(self.frequencies, self.phases):
            out = out * np.cos(nu * t + ph)
        return out

    @property
    def bandwidth(self) -> float:
        return sum(abs(nu) for nu in self.frequencies) + 1.0 / self.width


@dataclass(frozen=True, eq=False)
class CouplingTerm:
    system_op: np.ndarray
    field_op: np.ndarray
    profile: SwitchingProfile = field(default_factory=SwitchingProfile)

    def __post_init__(self):
        for name in ("system_op", "field_op"):
            a = np.array(getattr(self, name), dtype=complex)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise ValueError(f"{name} must be square")
            if np.max(np.abs(a - a.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(a))):
                raise ValueError(f"{name} must be Hermitian")
            a.setflags(write=False)
            object.__setattr__(self, name, a)


@dataclass(frozen=True, eq=False)
class ToyTransmissionModel:
    field_dim: int
    rho_f: DensityMatrix
    rho_B: DensityMatrix
    input: PureState
    couplings_A: tuple[CouplingTerm, ...] = ()
    couplings_B: tuple[CouplingTerm, ...] = ()
    lambda_A: float = 1.0
    lambda_B: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "couplings_A", tuple(self.couplings_A))
        object.__setattr__(self, "couplings_B", tuple(self.couplings_B))
        if len(self.input.dims) != 2:
            raise ValueError("input must be a pure state on ancilla x A")
        if self.rho_f.dim != self.field_dim:
            raise ValueError("rho_f dimension differs from field_dim")
        for c in self.couplings_A:
            self._check(c, self.input.dims[1], "A")
        for c in self.couplings_B:
            self._check(c, self.rho_B.dim, "B")

    def _check(self, c: CouplingTerm, d: int, who: str):
        if c.system_op.shape[0] != d:
            raise ValueError(f"coupling on {who} has dimension {c.system_op.shape[0]}, expected {d}")
        if c.field_op.shape[0] != self.field_dim:
            raise ValueError("coupling field operator does not match field_dim")

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.input.dims[0], self.input.dims[1], self.rho_B.dim, self.field_dim)

    def without_A(self) -> "ToyTransmissionModel":
        return replace(self, couplings_A=())

    def scaled(self, s: float) -> "ToyTransmissionModel":
        return replace(self, lambda_A=s * self.lambda_A, lambda_B=s * self.lambda_B)

    def terms(self):
        """(coupling constant, profile, full-space operator) for every term."""
        da, dA, dB, df = self.dims
        out = []
        for c in self.couplings_A:
            op = np.kron(np.kron(np.kron(np.eye(da), c.system_op), np.eye(dB)), c.field_op)
            out.append((self.lambda_A, c.profile, op))
        for c in self.couplings_B:
            op = np.kron(np.kron(np.eye(da * dA), c.system_op), c.field_op)
            out.append((self.lambda_B, c.profile, op))
        return out

    def initial_state(self) -> np.ndarray:
        v = self.input.amplitudes
        return np.kron(np.kron(np.outer(v, v.conj()), self.rho_B.data), self.rho_f.data)


@dataclass(frozen=True)
class TimeGrid:
    t_min: float
    t_max: float
    steps: int = 512

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise ValueError("t_min must be below t_max")
        if self.steps < 2:
            raise ValueError("at least two steps are required")

    @classmethod
    def covering(cls, model: ToyTransmissionModel, widths: float = 8.0, steps: int = 512) -> "TimeGrid":
        profiles = [c.profile for c in model.couplings_A + model.couplings_B]
        if not profiles:
            return cls(-1.0, 1.0, steps)
        lo = min(p.center - widths * p.width for p in profiles)
        hi = max(p.center + widths * p.width for p in profiles)
        return cls(lo, hi, steps)

    def check_covers(self, model: ToyTransmissionModel, widths: float = 8.0):
        for c in model.couplings_A + model.couplings_B:
            p = c.profile
            if p.center - widths * p.width < self.t_min - 1e-12 or p.center + widths * p.width > self.t_max + 1e-12:
                raise ValueError(f"time grid does not cover +/-{widths:g} switching widths")


# -- Dyson terms ------------------------------------------------------------


def _trapezoid_integrals(profiles: Sequence[SwitchingProfile], grid: TimeGrid, n: int):
    t = np.linspace(grid.t_min, grid.t_max, n + 1)
    h = t[1] - t[0]
    f = np.array([p(t) for p in profiles])  # (K, n+1)
    w = np.full(n + 1, h)
    w[0] = w[-1] = h / 2
    single = f @ w
    cum = np.zeros_like(f)
    cum[:, 1:] = np.cumsum(0.5 * h * (f[:, 1:] + f[:, :-1]), axis=1)
    nested = (f * w) @ cum.T  # nested[k, l] = int f_k(t) int^t f_l
    return single, nested


def time_integrals(
    profiles: Sequence[SwitchingProfile], grid: TimeGrid, tol: float = DYSON_TOL, max_doublings: int = 8
):
    """Romberg-extrapolated single and nested integrals with step doubling.

    Returns (J, I, error estimate).
    """
    if not profiles:
        return np.zeros(0), np.zeros((0, 0)), 0.0
    n = grid.steps
    err = math.inf
    for _ in range(max_doublings + 1):
        levels = [_trapezoid_integrals(profiles, grid, n * 2**j) for j in range(3)]
        r1 = [(4 * levels[j + 1][i] - levels[j][i]) / 3 for j in range(2) for i in range(2)]
        # r1 = [J(n,2n), I(n,2n), J(2n,4n), I(2n,4n)]
        j_est = (16 * r1[2] - r1[0]) / 15
        i_est = (16 * r1[3] - r1[1]) / 15
        scale = max(1.0, float(np.max(np.abs(i_est))), float(np.max(np.abs(j_est))))
        err = max(float(np.max(np.abs(r1[2] - r1[0]))), float(np.max(np.abs(r1[3] - r1[1]))))
        if err <= tol * scale:
            return j_est, i_est, err
        n *= 2
    raise ConvergenceError("nested Dyson time integrals did not stabilize; grid too coarse", err)


class DysonTerms(NamedTuple):
    rho0: MultipartiteOperator
    rho1: MultipartiteOperator
    rho2: MultipartiteOperator
    error: float


def _dyson_full(model: ToyTransmissionModel, grid: TimeGrid):
    terms = model.terms()
    rho0 = model.initial_state()
    D = rho0.shape[0]
    if not terms:
        z = np.zeros((D, D), dtype=complex)
        return rho0, z, z, 0.0
    lam = np.array([t[0] for t in terms])
    ops = np.array([t[2] for t in terms])
    J, I, err = time_integrals([t[1] for t in terms], grid)
    u1 = -1j * np.tensordot(lam * J, ops, axes=1)
    coef = -(lam[:, None] * lam[None, :]) * I
    u2 = np.zeros((D, D), dtype=complex)
    for k in range(len(terms)):
        u2 += ops[k] @ np.tensordot(coef[k], ops, axes=1)
    a1 = u1 @ rho0
    rho1 = a1 + a1.conj().T
    a2 = u2 @ rho0
    rho2 = a2 + a2.conj().T + u1 @ rho0 @ u1.conj().T
    return rho0, rho1, rho2, err


def dyson_reduced_terms(model: ToyTransmissionModel, grid: TimeGrid | None = None) -> DysonTerms:
    """Zeroth, first and second order ancilla-B states at the model's couplings."""
    grid = grid or TimeGrid.covering(model)
    grid.check_covers(model)
    full = _dyson_full(model, grid)
    dims = model.dims
    red = [MultipartiteOperator(partial_trace_array(x, dims, [0, 2]), (dims[0], dims[2])) for x in full[:3]]
    return DysonTerms(red[0], red[1], red[2], full[3])


def _pt(op: MultipartiteOperator) -> MultipartiteOperator:
    a = partial_transpose_array(op.data, op.dims, 0)
    return MultipartiteOperator(0.5 * (a + a.conj().T), op.dims)


def kernel_projector(model: ToyTransmissionModel, terms: DysonTerms | None = None) -> MultipartiteOperator | None:
    """Projector onto the zero eigenspace of the unperturbed partial transpose,
    or None when that eigenspace is empty."""
    rho0 = terms.rho0 if terms is not None else dyson_reduced_terms(model).rho0
    try:
        return perturb.eigenspace_projector(_pt(rho0), 0.0)
    except ValueError:
        return None


class FirstOrderCheck(NamedTuple):
    max_abs: float
    vacuous: bool


def check_first_order(model: ToyTransmissionModel, grid: TimeGrid | None = None) -> FirstOrderCheck:
    """max |entry| of P0 (rho1)^T P0; zero by the kernel argument.

    Vacuous (P0 = 0) when the receiver's initial state has trivial kernel.
    """
    terms = dyson_reduced_terms(model, grid)
    p0 = kernel_projector(model, terms)
    if p0 is None:
        return FirstOrderCheck(0.0, True)
    val = p0.data @ _pt(terms.rho1).data @ p0.data
    return FirstOrderCheck(float(np.max(np.abs(val))), False)


def second_order_operator(
    model: ToyTransmissionModel, grid: TimeGrid | None = None, include_HA: bool = True
) -> MultipartiteOperator:
    """P0 S2 P0 - P0 S1 R S1 P0 for S_n the partial transposes of the Dyson terms;
    its eigenvalues on range(P0) are the second-order shifts of the zero eigenvalue."""
    m = model if include_HA else model.without_A()
    terms = dyson_reduced_terms(m, grid)
    series = perturb.HermitianSeries(_pt(terms.rho0), _pt(terms.rho1), _pt(terms.rho2))
    if kernel_projector(m, terms) is None:
        raise ValueError("receiver state has trivial kernel; the second-order operator is empty")
    k = perturb.second_order_operator(series, 0.0)
    return MultipartiteOperator(0.5 * (k + k.conj().T), terms.rho0.dims)


def predicted_min_coefficient(model: ToyTransmissionModel, grid: TimeGrid | None = None) -> float:
    """Smallest second-order shift of the zero eigenvalue (per unit lambda_scale^2)."""
    k = second_order_operator(model, grid)
    q = perturb.range_basis(kernel_projector(model))
    return float(np.linalg.eigvalsh(q.conj().T @ k.data @ q)[0])


# -- exact evolution --------------------------------------------------------


def _taylor_terms(bound: float, eps: float = 1e-18) -> int:
    """Terms needed so the Taylor remainder of exp stays below eps for ||x|| <= bound."""
    term, j = 1.0, 0
    while term > eps and j < 40:
        j += 1
        term *= bound / j
    return j


def _expm_apply(omega: np.ndarray, v: np.ndarray, bound: float) -> np.ndarray:
    """exp(omega) v by a Taylor series; ``bound`` majorizes ||omega||."""
    squarings = max(0, int(math.ceil(math.log2(bound / 0.5)))) if bound > 0.5 else 0
    omega = omega / 2**squarings
    terms = _taylor_terms(bound / 2**squarings)
    for _ in range(2**squarings):
        out = v.copy()
        term = v
        for j in range(1, terms + 1):
            term = omega @ term / j
            out += term
        v = out
    return v


_GAUSS_OFFSETS = (0.5 - math.sqrt(3) / 6, 0.5 + math.sqrt(3) / 6)


def _propagate(lams, profiles, ops, vecs, grid: TimeGrid, n: int, scales) -> list[np.ndarray]:
    """Fourth-order Magnus integrator with two Gauss points per step, run for
    every coupling scale at once (the step Hamiltonians are shared)."""
    h = (grid.t_max - grid.t_min) / n
    t0 = grid.t_min + h * np.arange(n)
    t1 = t0 + _GAUSS_OFFSETS[0] * h
    t2 = t0 + _GAUSS_OFFSETS[1] * h
    f1 = np.array([lam * p(t1) for lam, p in zip(lams, profiles)])  # (K, n)
    f2 = np.array([lam * p(t2) for lam, p in zip(lams, profiles)])
    norms = np.array([np.linalg.norm(o, 2) for o in ops])
    b1 = np.abs(f1).T @ norms  # bounds on ||H(t1)||, ||H(t2)|| per step
    b2 = np.abs(f2).T @ norms
    c = math.sqrt(3) * h * h / 12
    vs = [vecs.copy() for _ in scales]
    for s in range(n):
        h1 = np.tensordot(f1[:, s], ops, axes=1)
        h2 = np.tensordot(f2[:, s], ops, axes=1)
        first = -0.5j * h * (h1 + h2)
        second = -c * (h2 @ h1 - h1 @ h2)
        for i, x in enumerate(scales):
            bound = x * 0.5 * h * (b1[s] + b2[s]) + x * x * 2 * c * b1[s] * b2[s]
            vs[i] = _expm_apply(x * first + (x * x) * second, vs[i], bound)
    return vs


def _initial_vectors(model: ToyTransmissionModel):
    env = np.kron(model.rho_B.data, model.rho_f.data)
    w, u = np.linalg.eigh(0.5 * (env + env.conj().T))
    keep = w > 1e-15
    vecs = np.kron(model.input.amplitudes[:, None], u[:, keep] * np.sqrt(w[keep]))
    return vecs


def evolve_many(
    model: ToyTransmissionModel, scales, grid: TimeGrid | None = None, tol: float = EVOLVE_TOL
) -> tuple[list[np.ndarray], list[float]]:
    """Final total-system density matrices for each coupling scale, with
    step-halving error estimates.  Steps are doubled until every scale
    meets ``tol``."""
    grid = grid or TimeGrid.covering(model)
    scales = [float(x) for x in scales]
    terms = model.terms()
    vecs = _initial_vectors(model)
    pure = vecs @ vecs.conj().T
    active = [i for i, x in enumerate(scales) if x != 0]
    out = [pure.copy() for _ in scales]
    errs = [0.0] * len(scales)
    if not terms or not active:
        return out, errs
    lams = [t[0] for t in terms]
    profiles = [t[1] for t in terms]
    ops = np.array([t[2] for t in terms])
    top = max(abs(scales[i]) for i in active)
    band = max(p.bandwidth for p in profiles)
    opnorm = top * max(abs(l) * np.linalg.norm(o, 2) for l, _, o in terms)
    # start where a step covers a small fraction of the fastest scale
    n = max(grid.steps, int(math.ceil((grid.t_max - grid.t_min) * max(band, opnorm) / 0.5)))
    sub = [scales[i] for i in active]
    prev = [v @ v.conj().T for v in _propagate(lams, profiles, ops, vecs, grid, n, sub)]
    err = [math.inf]
    for _ in range(6):
        n *= 2
        cur = [v @ v.conj().T for v in _propagate(lams, profiles, ops, vecs, grid, n, sub)]
        err = [float(np.max(np.abs(a - b))) for a, b in zip(cur, prev)]
        if max(err) <= tol:
            for j, i in enumerate(active):
                out[i], errs[i] = cur[j], err[j]
            return out, errs
        prev = cur
    raise ConvergenceError("exact evolution failed step-halving test", max(err))


def evolve_full(
    model: ToyTransmissionModel, lambda_scale: float = 1.0, grid: TimeGrid | None = None, tol: float = EVOLVE_TOL
) -> tuple[np.ndarray, float]:
    """Final total-system density matrix and its step-halving error estimate."""
    rhos, errs = evolve_many(model, [lambda_scale], grid, tol)
    return rhos[0], errs[0]


def exact_evolve(
    model: ToyTransmissionModel, lambda_scale: float = 1.0, grid: TimeGrid | None = None, tol: float = EVOLVE_TOL
) -> DensityMatrix:
    rho, _ = evolve_full(model, lambda_scale, grid, tol)
    return _reduce(model, rho)


def _reduce(model: ToyTransmissionModel, rho: np.ndarray) -> DensityMatrix:
    dims = model.dims
    red = partial_trace_array(rho, dims, [0, 2])
    return DensityMatrix(0.5 * (red + red.conj().T), (dims[0], dims[2]), tol=1e-8)


@dataclass(frozen=True)
class ScalingResult:
    lambdas: np.ndarray
    negativities: np.ndarray
    min_pt_eigenvalues: np.ndarray
    exponent: float  # nan when fewer than two nonzero negativities
    quadratic_coefficient: float
    polynomial: np.ndarray  # coefficients c0..c4 of the min eigenvalue fit
    errors: np.ndarray  # step-halving error estimate of each evolution

    def records(self) -> list[dict]:
        return [
            {"lambda": float(l), "negativity": float(n), "min_pt_eigenvalue": float(e), "evolution_error": float(r)}
            for l, n, e, r in zip(self.lambdas, self.negativities, self.min_pt_eigenvalues, self.errors)
        ]


def fit_min_eigenvalue(lambdas: np.ndarray, values: np.ndarray, degree: int = 4) -> np.ndarray:
    """Least-squares polynomial coefficients c0..c_degree with column scaling."""
    lam = np.asarray(lambdas, dtype=float)
    scale = np.max(np.abs(lam))
    x = lam / scale
    vander = np.vander(x, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(vander, np.asarray(values, dtype=float), rcond=None)
    return coef / scale ** np.arange(degree + 1)


def loglog_exponent(lambdas, negs) -> float:
    lam = np.asarray(lambdas, dtype=float)
    negs = np.asarray(negs, dtype=float)
    sel = negs > ZERO_NEGATIVITY
    if sel.sum() < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(lam[sel]), np.log(negs[sel]), 1)
    return float(slope)


def negativity_scaling(
    model: ToyTransmissionModel, lambdas: Sequence[float], grid: TimeGrid | None = None
) -> ScalingResult:
    lam = np.asarray(lambdas, dtype=float)
    if np.all(lam == 0):
        z = np.zeros_like(lam)
        return ScalingResult(lam, z, z.copy(), math.nan, 0.0, np.zeros(5), z.copy())
    if lam.size < 4:
        raise ValueError("at least four coupling scales are needed")
    if np.any(lam <= 0) or np.any(lam > 0.1):
        raise ValueError("coupling scales must lie in (0, 0.1]")
    if lam.max() / lam.min() < 10 * (1 - 1e-12):
        raise ValueError("coupling scales must span at least a decade")
    negs, mins = [], []
    fulls, errs = evolve_many(model, lam, grid)
    for full in fulls:
        rho = _reduce(model, full)
        n = negativity(rho, 0)
        negs.append(n if n > ZERO_NEGATIVITY else 0.0)
        mins.append(min_pt_eigenvalue(rho, 0))
    negs = np.array(negs)
    mins = np.array(mins)
    deg = min(4, lam.size - 1)
    poly = fit_min_eigenvalue(lam, mins, deg)
    if np.linalg.cond(np.vander(lam / lam.max(), deg + 1, increasing=True)) > 1e12:
        raise ValueError("polynomial fit is ill-conditioned")
    poly = np.pad(poly, (0, 5 - poly.size))
    return ScalingResult(lam, negs, mins, loglog_exponent(lam, negs), float(poly[2]), poly, np.array(errs))


# -- model builders ---------------------------------------------------------


def _ladder(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d)), 1).astype(complex)


def detector_field_terms(
    gap: float, omega: float, center: float, width: float, field_dim: int
) -> tuple[CouplingTerm, ...]:
    """Qubit monopole coupled to one oscillator mode, in the interaction picture.

    (|e><g| e^{i gap t} + h.c.) x (a e^{-i omega t} + h.c.) expanded into four
    Hermitian products with real profiles.
    """
    a = _ladder(field_dim)
    x = a + a.conj().T
    p = 1j * (a.conj().T - a)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)  # i(|e><g| - |g><e|)
    half_pi = math.pi / 2

    def prof(ph1, ph2):
        return SwitchingProfile(center, width, (gap, omega), (ph1, ph2))

    return (
        CouplingTerm(sx, x, prof(0.0, 0.0)),
        CouplingTerm(sx, p, prof(0.0, -half_pi)),
        CouplingTerm(sy, x, prof(-half_pi, 0.0)),
        CouplingTerm(sy, p, prof(-half_pi, -half_pi)),
    )


def oscillator_model(
    field_dim: int = 10,
    p: float = 0.5,
    gap_A: float = 1.0,
    gap_B: float = 1.0,
    omega: float = 1.0,
    center_A: float = 0.0,
    center_B: float = 2.0,
    width_A: float = 1.0,
    width_B: float = 1.0,
    lambda_A: float = 1.0,
    lambda_B: float = 1.0,
) -> ToyTransmissionModel:
    """Truncated-oscillator intermediary in its ground state, receiver in |g>,
    input sqrt(p)|gg> + sqrt(1-p)|ee>; B's window follows A's."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    vac = np.zeros((field_dim, field_dim), dtype=complex)
    vac[0, 0] = 1
    ground = np.diag([1.0, 0.0]).astype(complex)
    psi = PureState([math.sqrt(p), 0, 0, math.sqrt(1 - p)], (2, 2))
    return ToyTransmissionModel(
        field_dim,
        DensityMatrix(vac, (field_dim,)),
        DensityMatrix(ground, (2,)),
        psi,
        detector_field_terms(gap_A, omega, center_A, width_A, field_dim),
        detector_field_terms(gap_B, omega, center_B, width_B, field_dim),
        lambda_A,
        lambda_B,
    )


def random_model(
    rng: np.random.Generator,
    field_dim: int = 4,
    ancilla_dim: int = 2,
    system_dim: int = 2,
    terms_per_side: int = 2,
    field_rank: int | None = 1,
) -> ToyTransmissionModel:
    """Random Hermitian couplings and Gaussian-windowed profiles, a random pure
    ancilla-A input, a random pure receiver state and a random field state."""

    def herm(d):
        h = random_hermitian(d, rng)
        return h / np.linalg.norm(h, 2)

    def profile(center):
        n_freq = int(rng.integers(0, 3))
        return SwitchingProfile(
            center,
            float(rng.uniform(0.5, 1.5)),
            tuple(rng.uniform(0.2, 2.0, n_freq)),
            tuple(rng.uniform(0, 2 * math.pi, n_freq)),
        )

    c_a = float(rng.uniform(-1.0, 1.0))
    c_b = c_a + float(rng.uniform(0.5, 3.0))
    cA = tuple(CouplingTerm(herm(system_dim), herm(field_dim), profile(c_a)) for _ in range(terms_per_side))
    cB = tuple(CouplingTerm(herm(2), herm(field_dim), profile(c_b)) for _ in range(terms_per_side))
    rho_b = random_pure_state((2,), rng).projector()
    rho_f = random_density_matrix((field_dim,), rng, rank=field_rank)
    psi = random_pure_state((ancilla_dim, system_dim), rng)
    return ToyTransmissionModel(field_dim, rho_f, rho_b, psi, cA, cB, 1.0, 1.0)
