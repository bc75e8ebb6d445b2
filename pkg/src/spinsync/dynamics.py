"""Master-equation dynamics of the driven, dissipative spin.

In the frame rotating at the drive frequency the generator is

    d(rho)/dt = -i [delta Sz + epsilon Sy, rho]
                + (gamma_g / 2) D[S+ Sz] rho
                + (gamma_d / 2) D[S- Sz] rho,

with D[O] rho = O rho Odag - (Odag O rho + rho Odag O)/2. The S+ Sz / S- Sz
jump operators pump population toward m = +/-1 from above and below while
leaving |S, 0> untouched, which is what stabilizes the equatorial limit
cycle for integer spin. delta is the detuning between the spin splitting
and the drive; epsilon is the signal strength.

Superoperators are dense matrices acting on column-stacked density matrices:
vec(rho) = rho.flatten(order="F"), so vec(A rho B) = kron(B.T, A) vec(rho).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_algebra import build_spin_algebra, check_spin

__all__ = [
    "SystemParams",
    "Liouvillian",
    "Trajectory",
    "SteadyStateError",
    "DegenerateSteadyStateError",
    "vec",
    "unvec",
    "spre",
    "spost",
    "lindblad_dissipator",
    "build_liouvillian",
    "validate_density_matrix",
    "evolve",
    "steady_state",
    "limit_cycle_validity",
    "mean_sz",
]


class SteadyStateError(RuntimeError):
    """Steady-state solve failed (residual too large, singular solve, ...)."""


class DegenerateSteadyStateError(SteadyStateError):
    """The Liouvillian kernel is not one-dimensional; no unique steady state."""


@dataclass(frozen=True)
class SystemParams:
    """Parameters of the spin in the rotating frame.

    delta is the detuning, epsilon the signal strength, gamma_g / gamma_d the
    gain / damping rates. All rates share one unit; hbar = 1. Rates must be
    non-negative and not both gamma_g and gamma_d zero.
    """

    spin: float
    delta: float
    epsilon: float
    gamma_g: float
    gamma_d: float

    def __post_init__(self):
        object.__setattr__(self, "spin", check_spin(self.spin))
        for name in ("delta", "epsilon", "gamma_g", "gamma_d"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.gamma_g < 0.0 or self.gamma_d < 0.0:
            raise ValueError("gamma_g and gamma_d must be non-negative")
        if self.gamma_g == 0.0 and self.gamma_d == 0.0:
            raise ValueError("at least one of gamma_g, gamma_d must be positive")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be non-negative")

    @property
    def gamma_min(self):
        """The smaller of the two dissipation rates; the natural signal scale."""
        return min(self.gamma_g, self.gamma_d)

    @property
    def dim(self):
        return round(2.0 * self.spin) + 1


@dataclass(frozen=True)
class Liouvillian:
    """Dense superoperator matrix over column-stacked density matrices."""

    matrix: np.ndarray
    dim: int
    params: SystemParams


@dataclass(frozen=True)
class Trajectory:
    """Fixed-step integration output: times[k] and the matching states[k]."""

    times: np.ndarray
    states: list


def vec(rho):
    """Column-stack a matrix: vec(rho)[i + dim*j] = rho[i, j]."""
    return np.asarray(rho, dtype=complex).flatten(order="F")


def unvec(v, dim):
    """Inverse of vec for a (dim, dim) matrix."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def spre(a):
    """Superoperator of left multiplication: vec(A rho) = spre(A) vec(rho)."""
    a = np.asarray(a, dtype=complex)
    return np.kron(np.eye(a.shape[0]), a)


def spost(b):
    """Superoperator of right multiplication: vec(rho B) = spost(B) vec(rho)."""
    b = np.asarray(b, dtype=complex)
    return np.kron(b.T, np.eye(b.shape[0]))


def lindblad_dissipator(op):
    """Superoperator of D[O] rho = O rho Odag - (Odag O rho + rho Odag O)/2."""
    opdag = op.conj().T
    opdag_op = opdag @ op
    return spre(op) @ spost(opdag) - 0.5 * (spre(opdag_op) + spost(opdag_op))


def build_liouvillian(params):
    """Assemble the dense generator for the given parameters.

    The result annihilates the trace functional (vec(I)^T L = 0), so the
    flow is trace preserving, and its spectrum lies in the closed left half
    plane with the steady states in the kernel.
    """
    alg = build_spin_algebra(params.spin)
    h = params.delta * alg.sz + params.epsilon * alg.sy
    lmat = -1j * (spre(h) - spost(h))
    if params.gamma_g > 0.0:
        lmat = lmat + 0.5 * params.gamma_g * lindblad_dissipator(alg.sp @ alg.sz)
    if params.gamma_d > 0.0:
        lmat = lmat + 0.5 * params.gamma_d * lindblad_dissipator(alg.sm @ alg.sz)
    return Liouvillian(matrix=lmat, dim=alg.dim, params=params)


def validate_density_matrix(rho, dim=None, context=""):
    """Check the density-matrix invariants, raising ValueError on violation.

    Hermitian within 1e-10, unit trace within 1e-9, smallest eigenvalue
    above -1e-9.
    """
    rho = np.asarray(rho, dtype=complex)
    where = f" ({context})" if context else ""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}{where}")
    if dim is not None and rho.shape != (dim, dim):
        raise ValueError(f"density matrix has shape {rho.shape}, expected ({dim}, {dim}){where}")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > 1e-10:
        raise ValueError(f"density matrix is not Hermitian (defect {herm:.3e}){where}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > 1e-9:
        raise ValueError(f"density matrix trace {tr} is off unit by more than 1e-9{where}")
    lo = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)[0])
    if lo < -1e-9:
        raise ValueError(f"density matrix has eigenvalue {lo:.3e} < -1e-9{where}")
    return rho


def evolve(params, rho0, t_final, n_steps):
    """Integrate the master equation with fixed-step classical RK4.

    The state is propagated in vectorized form; every stored state is checked
    against the density-matrix invariants and a violation raises ValueError
    naming the offending time (the step size was too large for the rates).
    A safe default is dt <= 0.01 / max(|delta|, epsilon, gamma_g, gamma_d).

    Returns a Trajectory with n_steps + 1 entries including t = 0.
    """
    if t_final <= 0.0:
        raise ValueError(f"t_final must be positive, got {t_final!r}")
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps!r}")
    lio = build_liouvillian(params)
    rho0 = validate_density_matrix(rho0, dim=lio.dim, context="initial state")
    lmat = lio.matrix
    dt = float(t_final) / n_steps
    times = np.linspace(0.0, float(t_final), n_steps + 1)
    v = vec(rho0)
    states = [rho0.copy()]
    for k in range(n_steps):
        k1 = lmat @ v
        k2 = lmat @ (v + 0.5 * dt * k1)
        k3 = lmat @ (v + 0.5 * dt * k2)
        k4 = lmat @ (v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = unvec(v, lio.dim)
        try:
            validate_density_matrix(rho, dim=lio.dim, context=f"t={times[k + 1]:.6g}")
        except ValueError as exc:
            raise ValueError(f"integration left the physical state space: {exc}") from None
        states.append(rho)
    return Trajectory(times=times, states=states)


def steady_state(params, backend="eigen"):
    """Solve L(rho) = 0 for the unique steady state.

    backend "eigen" (production path) takes the eigenvector of the dense
    generator whose eigenvalue has the smallest modulus and errors out with
    DegenerateSteadyStateError if a second eigenvalue also lies within 1e-10
    of zero. backend "linear" replaces the first row of L with the trace
    constraint and solves the linear system; it exists as an independent
    cross-check of the eigen route.

    The raw solution is normalized to unit trace (which also removes the
    arbitrary eigenvector phase), hermitized as (rho + rho^dag)/2 to scrub
    rounding asymmetry, and validated; the residual ||L vec(rho)|| must come
    out below 1e-10 relative to the generator's scale.
    """
    lio = build_liouvillian(params)
    lmat = lio.matrix
    dim = lio.dim
    if backend == "eigen":
        evals, evecs = np.linalg.eig(lmat)
        order = np.argsort(np.abs(evals))
        if abs(evals[order[1]]) < 1e-10:
            raise DegenerateSteadyStateError(
                f"kernel of the generator is degenerate: |lambda_1| = {abs(evals[order[0]]):.3e}, "
                f"|lambda_2| = {abs(evals[order[1]]):.3e} are both below 1e-10"
            )
        rho = unvec(evecs[:, order[0]], dim)
    elif backend == "linear":
        a = lmat.copy()
        b = np.zeros(dim * dim, dtype=complex)
        # trace row: diagonal entries of rho sit at vec indices i*(dim+1)
        a[0, :] = 0.0
        a[0, np.arange(dim) * (dim + 1)] = 1.0
        b[0] = 1.0
        try:
            rho = unvec(np.linalg.solve(a, b), dim)
        except np.linalg.LinAlgError as exc:
            raise SteadyStateError(f"linear steady-state solve failed: {exc}") from None
    else:
        raise ValueError(f"unknown backend {backend!r}, expected 'eigen' or 'linear'")
    tr = complex(np.trace(rho))
    if abs(tr) < 1e-12 * float(np.linalg.norm(rho)):
        raise DegenerateSteadyStateError(
            "steady-state candidate is traceless; the kernel mixes trace-zero modes"
        )
    rho = rho / tr
    rho = (rho + rho.conj().T) / 2.0
    residual = float(np.linalg.norm(lmat @ vec(rho)))
    if residual > 1e-10 * max(1.0, float(np.linalg.norm(lmat))):
        raise SteadyStateError(
            f"steady-state residual {residual:.3e} exceeds tolerance; solve did not converge"
        )
    try:
        validate_density_matrix(rho, dim=dim, context="steady state")
    except ValueError as exc:
        raise SteadyStateError(str(exc)) from None
    return rho


def limit_cycle_validity(params):
    """Classify the undriven (epsilon = 0) steady state as a limit cycle.

    Returns one of:
      "valid"         phase symmetric with weight on interior m levels; the
                      phase is free and the amplitude is away from the poles.
      "no_free_phase" the steady state breaks rotational symmetry about z.
      "extremal_only" phase symmetric but supported on m = +/-S alone, so
                      there is no free phase to lock (any spin-1/2 state
                      commuting with a spin direction is of this kind).
    """
    if params.epsilon != 0.0:
        raise ValueError("limit-cycle classification requires epsilon = 0")
    rho = steady_state(params)
    alg = build_spin_algebra(params.spin)
    if float(np.max(np.abs(rho @ alg.sz - alg.sz @ rho))) > 1e-10:
        return "no_free_phase"
    populations = np.diag(rho).real
    interior = np.abs(np.abs(alg.m_values) - params.spin) > 0.25
    if float(populations[interior].sum()) < 1e-6:
        return "extremal_only"
    return "valid"


def mean_sz(rho, alg):
    """Expectation value <Sz> of a density matrix."""
    return float(np.trace(np.asarray(rho) @ alg.sz).real)
