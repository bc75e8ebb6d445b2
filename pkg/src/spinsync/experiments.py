"""Parameter studies: locking curves, Arnold tongue, breakdown, spin-1/2 no-go.

Sweep coordinates (delta, epsilon) are expressed in units of gamma_min of the
base parameter set, the natural scale of the weak-signal regime, and are
echoed unchanged into the result rows; absolute rates are recovered by
multiplying with base.gamma_min.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import (
    SteadyStateError,
    SystemParams,
    evolve,
    limit_cycle_validity,
    mean_sz,
    steady_state,
)
from .husimi import coherent_amplitudes, husimi_q, make_grid, peak, sync_measure
from .spin_algebra import build_spin_algebra, wigner_small_d

__all__ = [
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "analytic_sdot",
    "analytic_steady_s",
    "first_order_consistency",
    "arnold_sweep",
    "breakdown_scan",
    "spin_comparison",
    "qubit_nogo_report",
]


@dataclass(frozen=True)
class SweepSpec:
    """A grid of sweep points over a base parameter set.

    deltas and epsilons are in units of base.gamma_min; epsilons must be
    non-negative and base.gamma_min positive so the units are meaningful.
    """

    base: SystemParams
    deltas: tuple
    epsilons: tuple
    n_theta: int = 64
    n_phi: int = 360

    def __post_init__(self):
        deltas = tuple(float(d) for d in self.deltas)
        epsilons = tuple(float(e) for e in self.epsilons)
        if not deltas or not epsilons:
            raise ValueError("deltas and epsilons must be non-empty")
        if not all(np.isfinite(deltas)) or not all(np.isfinite(epsilons)):
            raise ValueError("sweep coordinates must be finite")
        if min(epsilons) < 0.0:
            raise ValueError("epsilons must be non-negative")
        if self.base.gamma_min <= 0.0:
            raise ValueError("base.gamma_min must be positive to set the sweep units")
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "epsilons", epsilons)
        object.__setattr__(self, "n_theta", int(self.n_theta))
        object.__setattr__(self, "n_phi", int(self.n_phi))


@dataclass(frozen=True)
class SweepRow:
    """One sweep point; delta and epsilon are in units of base gamma_min.

    equator_weight is filled by breakdown_scan only. error carries the solver
    message when the point failed, in which case the observables are nan.
    """

    delta: float
    epsilon: float
    s_max: float
    phi_star: float
    mean_sz: float
    equator_weight: float = None
    error: str = None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple


def analytic_sdot(phi, t, params):
    """First-order rate of change of S(phi) for spin 1.

    dS/dt = (3 epsilon / 16) (exp(-gamma_g t / 2) - exp(-gamma_d t / 2))
            cos(phi - delta t),

    valid to first order in epsilon for the |1,0><1,0| start state. Vanishes
    at t = 0 and for balanced rates, where locking is second order at best.
    """
    if params.spin != 1.0:
        raise ValueError("the first-order formula holds for spin 1 only")
    phi = np.asarray(phi, dtype=float)
    t = np.asarray(t, dtype=float)
    out = (
        (3.0 * params.epsilon / 16.0)
        * (np.exp(-params.gamma_g * t / 2.0) - np.exp(-params.gamma_d * t / 2.0))
        * np.cos(phi - params.delta * t)
    )
    return out if out.ndim else float(out)


def analytic_steady_s(phi, params):
    """First-order steady-state S(phi) for spin 1 on resonance.

    S(phi) = (3 epsilon / 8) (1/gamma_g - 1/gamma_d) cos(phi): the time
    integral of analytic_sdot at delta = 0. Positive gain excess locks the
    peak to phi = 0, damping excess to phi = pi; balanced rates give zero.
    """
    if params.spin != 1.0:
        raise ValueError("the first-order formula holds for spin 1 only")
    if params.delta != 0.0:
        raise ValueError("the closed form is the resonant (delta = 0) one")
    if params.gamma_g <= 0.0 or params.gamma_d <= 0.0:
        raise ValueError("both rates must be positive for the steady-state form")
    phi = np.asarray(phi, dtype=float)
    out = (
        (3.0 * params.epsilon / 8.0)
        * (1.0 / params.gamma_g - 1.0 / params.gamma_d)
        * np.cos(phi)
    )
    return out if out.ndim else float(out)


def first_order_consistency(params, t_final, n_steps, *, n_theta=64, n_phi=360,
                            eval_stride=None):
    """Compare the integrated dS/dt against the first-order formula.

    Starting from |1,0><1,0|, integrates the full master equation, takes
    central differences of S(phi, t) in time, and returns the worst absolute
    deviation from analytic_sdot over all interior sample times and phi
    nodes, normalized by the formula's peak amplitude
    (3 epsilon / 16) max_t |exp(-gamma_g t/2) - exp(-gamma_d t/2)|.

    For balanced rates that peak is exactly zero and the raw (unnormalized)
    deviation is returned instead; it is then O(epsilon^2) uniformly.

    Requires spin 1 and the weak-signal regime epsilon <= 0.1 gamma_min.
    eval_stride controls how many stored states enter the stencil (default
    about 400 evaluations); the central-difference step is stride * dt.
    """
    if params.spin != 1.0:
        raise ValueError("consistency check is defined for spin 1 only")
    if params.epsilon > 0.1 * params.gamma_min + 1e-15:
        raise ValueError("epsilon exceeds the weak-signal regime (0.1 gamma_min)")
    n_steps = int(n_steps)
    stride = int(eval_stride) if eval_stride else max(1, n_steps // 400)
    idx = np.arange(0, n_steps + 1, stride)
    if idx.size < 3:
        raise ValueError("n_steps too small for the derivative stencil")
    alg = build_spin_algebra(1.0)
    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[1, 1] = 1.0
    traj = evolve(params, rho0, t_final, n_steps)
    grid = make_grid(n_theta, n_phi)
    amps = coherent_amplitudes(alg, grid)
    svals = np.stack(
        [
            sync_measure(husimi_q(traj.states[k], alg, grid, amplitudes=amps)).values
            for k in idx
        ]
    )
    h = stride * (traj.times[1] - traj.times[0])
    numeric = (svals[2:] - svals[:-2]) / (2.0 * h)
    t_mid = traj.times[idx[1:-1]]
    analytic = analytic_sdot(grid.phi_nodes[None, :], t_mid[:, None], params)
    envelope = (3.0 * params.epsilon / 16.0) * np.abs(
        np.exp(-params.gamma_g * t_mid / 2.0) - np.exp(-params.gamma_d * t_mid / 2.0)
    )
    peak_amp = float(envelope.max())
    deviation = float(np.max(np.abs(numeric - analytic)))
    return deviation / peak_amp if peak_amp > 0.0 else deviation


def _point_metrics(params, alg, grid, amps):
    rho = steady_state(params)
    q = husimi_q(rho, alg, grid, amplitudes=amps)
    phi_star, s_max = peak(sync_measure(q))
    return rho, q, s_max, phi_star


def _sweep(spec, points, threads, want_equator):
    alg = build_spin_algebra(spec.base.spin)
    grid = make_grid(spec.n_theta, spec.n_phi)
    amps = coherent_amplitudes(alg, grid)
    scale = spec.base.gamma_min
    band = np.abs(grid.theta_nodes - np.pi / 2.0) < np.pi / 8.0

    def solve_one(point):
        d, e = point
        try:
            params = replace(spec.base, delta=d * scale, epsilon=e * scale)
            rho, q, s_max, phi_star = _point_metrics(params, alg, grid, amps)
        except (SteadyStateError, ValueError) as exc:
            return SweepRow(
                delta=d, epsilon=e, s_max=np.nan, phi_star=np.nan,
                mean_sz=np.nan, equator_weight=np.nan if want_equator else None,
                error=str(exc),
            )
        weight = None
        if want_equator:
            weight = float(
                grid.theta_weights[band] @ q.values[band].sum(axis=1)
            ) * grid.phi_spacing
        return SweepRow(
            delta=d, epsilon=e, s_max=s_max, phi_star=phi_star,
            mean_sz=mean_sz(rho, alg), equator_weight=weight,
        )

    if threads and int(threads) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            rows = tuple(pool.map(solve_one, points))
    else:
        rows = tuple(solve_one(p) for p in points)
    return SweepResult(spec=spec, rows=rows)


def arnold_sweep(spec, threads=1):
    """Steady-state locking metrics over the (delta, epsilon) grid.

    One row per point, delta outer and epsilon inner, in spec order. A solver
    failure at a point is recorded on that row (error message, nan
    observables) and does not abort the sweep. The s_max landscape over this
    grid is the locking tongue: even in delta, widening with epsilon.
    """
    points = [(d, e) for d in spec.deltas for e in spec.epsilons]
    return _sweep(spec, points, threads, want_equator=False)


def breakdown_scan(params, epsilons, n_theta=64, n_phi=360, threads=1):
    """Scan signal strength on resonance and track limit-cycle deformation.

    epsilons are in units of params.gamma_min. Each row carries <Sz> (zero on
    the intact limit cycle, pushed toward a pole as the signal overwhelms the
    dissipation; its sign follows the gain/damping asymmetry) and the Q
    weight within the equatorial band |theta - pi/2| < pi/8.
    """
    if params.delta != 0.0:
        raise ValueError("breakdown scan is defined on resonance (delta = 0)")
    spec = SweepSpec(
        base=params, deltas=(0.0,), epsilons=tuple(epsilons),
        n_theta=n_theta, n_phi=n_phi,
    )
    points = [(0.0, e) for e in spec.epsilons]
    return _sweep(spec, points, threads, want_equator=True)


def spin_comparison(spins, base, n_theta=64, n_phi=360):
    """Resonant peak locking measure for each integer spin in spins.

    Reuses the base rates and signal strength with delta forced to 0.
    Returns a list of (spin, s_max) pairs in input order. Half-integer spins
    are rejected: the undriven steady state is then supported on the poles
    alone and there is no limit cycle whose locking could be compared.
    """
    results = []
    for s in spins:
        if abs(2.0 * float(s) % 2.0) > 1e-12:
            raise ValueError(f"spin_comparison needs integer spins, got {s!r}")
        params = replace(base, spin=float(s), delta=0.0)
        alg = build_spin_algebra(params.spin)
        grid = make_grid(n_theta, n_phi)
        amps = coherent_amplitudes(alg, grid)
        _, _, s_max, _ = _point_metrics(params, alg, grid, amps)
        results.append((params.spin, s_max))
    return results


def qubit_nogo_report(axis, gamma_g=0.1, gamma_d=1.0, n_lambda=21,
                      n_theta=64, n_phi=360):
    """Demonstrate that spin 1/2 admits no phase-symmetric interior state.

    Every spin-1/2 state commuting with n.S is (I + lam n.sigma)/2 for some
    lam in [-1, 1]: a mixture of the two poles along the axis, nothing in
    between. The report sweeps lam, verifying that the Bloch vector stays
    colinear with the axis and that the Q function is azimuthally symmetric
    about it, then classifies the undriven dissipative map, which at this
    spin can only come out "extremal_only": there is no free phase to lock.
    """
    n_lambda = int(n_lambda)
    if n_lambda < 2:
        raise ValueError("n_lambda must be at least 2")
    alg = build_spin_algebra(0.5)
    n = axis.unit_vector
    n_dot_s = n[0] * alg.sx + n[1] * alg.sy + n[2] * alg.sz
    # rotation with R Sz Rdag = n.S, used to align the axis with z
    rot = np.diag(np.exp(-1j * alg.m_values * axis.phi)) @ wigner_small_d(0.5, axis.theta)
    grid = make_grid(n_theta, n_phi)
    amps = coherent_amplitudes(alg, grid)
    lambdas = np.linspace(-1.0, 1.0, n_lambda)
    bloch_dev = []
    q_variation = []
    for lam in lambdas:
        rho = 0.5 * np.eye(2, dtype=complex) + lam * n_dot_s
        bloch = 2.0 * np.array(
            [
                np.trace(rho @ alg.sx).real,
                np.trace(rho @ alg.sy).real,
                np.trace(rho @ alg.sz).real,
            ]
        )
        bloch_dev.append(float(np.linalg.norm(bloch - lam * n)))
        aligned = rot.conj().T @ rho @ rot
        q = husimi_q(aligned, alg, grid, amplitudes=amps)
        q_variation.append(float(np.max(np.ptp(q.values, axis=1))))
    verdict = limit_cycle_validity(
        SystemParams(spin=0.5, delta=0.0, epsilon=0.0,
                     gamma_g=gamma_g, gamma_d=gamma_d)
    )
    return {
        "spin": 0.5,
        "axis": {"theta": float(axis.theta), "phi": float(axis.phi)},
        "gamma_g": float(gamma_g),
        "gamma_d": float(gamma_d),
        "lambdas": [float(x) for x in lambdas],
        "bloch_deviation": bloch_dev,
        "q_phi_variation": q_variation,
        "max_bloch_deviation": max(bloch_dev),
        "max_q_phi_variation": max(q_variation),
        "verdict": verdict,
    }
