"""Husimi Q phase portraits on the sphere and the phase-locking measure S(phi).

The sphere is sampled on a product grid: Gauss-Legendre nodes in u = cos(theta)
times a uniform azimuthal grid. The Gauss-Legendre rule integrates the
polynomial-in-u parts of coherent-state overlaps exactly and the uniform phi
grid sums trigonometric polynomials of degree below n_phi exactly, so
full-sphere quadratures are exact to rounding once the node counts clear the
spin-dependent minimums documented on make_grid (the odd azimuthal harmonics,
whose theta profiles are not polynomial in u, cancel in the phi sum). Fixed-phi
theta marginals would not enjoy that cancellation, so they are evaluated in
closed form instead; see QField.theta_marginal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from scipy.special import beta as beta_fn

__all__ = [
    "SphereGrid",
    "QField",
    "PhaseDistribution",
    "make_grid",
    "coherent_amplitudes",
    "husimi_q",
    "sphere_integral",
    "sync_measure",
    "peak",
]


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature grid over the sphere.

    theta_nodes are the arccosines of the Gauss-Legendre nodes, sorted
    ascending; theta_weights are the matching Gauss-Legendre weights in
    u = cos(theta) and sum to 2. phi_nodes are uniform on [0, 2*pi) with
    spacing exactly 2*pi/n_phi, starting at 0.
    """

    theta_nodes: np.ndarray
    theta_weights: np.ndarray
    phi_nodes: np.ndarray

    @property
    def n_theta(self):
        return self.theta_nodes.size

    @property
    def n_phi(self):
        return self.phi_nodes.size

    @property
    def phi_spacing(self):
        return 2.0 * np.pi / self.n_phi


@dataclass(frozen=True)
class QField:
    """Husimi Q sampled on a SphereGrid; values[i, j] = Q(theta_i, phi_j).

    Values are non-negative (negative dips below -1e-12 are rejected upstream)
    and quadrature-normalized to the trace of the underlying state.
    theta_marginal[j] holds the polar integral of Q(theta, phi_j) sin(theta),
    evaluated in closed form when the field is built: the grid's u = cos(theta)
    rule is exact only for the even-azimuthal-parity part of Q (the odd
    coherences carry a sqrt(1 - u^2) factor), so fixed-phi marginals come from
    the exact Dicke overlap integrals instead of node sums.
    """

    grid: SphereGrid
    values: np.ndarray
    theta_marginal: np.ndarray


@dataclass(frozen=True)
class PhaseDistribution:
    """The measure S(phi) on the grid's azimuth nodes.

    S integrates to zero over [0, 2*pi) and vanishes identically when the
    underlying state carries no phase preference.
    """

    phi_nodes: np.ndarray
    values: np.ndarray


def make_grid(n_theta, n_phi):
    """Build the sphere quadrature grid used throughout.

    For spin S, n_theta >= 2S+2 and n_phi > 4S+1 keep all integrals here
    exact to rounding (coherent-state products are polynomials of degree
    2S in cos(theta) and trigonometric polynomials of degree 2S in phi);
    the defaults used by the command-line tools are far above both bounds.
    """
    n_theta = int(n_theta)
    n_phi = int(n_phi)
    if n_theta < 2 or n_phi < 2:
        raise ValueError("grid needs at least 2 nodes on each axis")
    u, w = np.polynomial.legendre.leggauss(n_theta)
    # leggauss returns u ascending, i.e. theta descending; flip to ascending theta
    theta = np.arccos(u)[::-1].copy()
    weights = w[::-1].copy()
    phi = np.arange(n_phi) * (2.0 * np.pi / n_phi)
    return SphereGrid(theta_nodes=theta, theta_weights=weights, phi_nodes=phi)


@lru_cache(maxsize=32)
def _dicke_overlap_integrals(two_s):
    """Exact integrals I[m, n] = int_0^pi d_m(theta) d_n(theta) sin(theta) dtheta.

    d_m is the amplitude <S,m|theta, phi=0> = sqrt(C(2S, S-m))
    cos^(S+m)(theta/2) sin^(S-m)(theta/2); the integral reduces to a Beta
    function. Indexed in basis order (m descending).
    """
    s = two_s / 2.0
    m = np.arange(s, -s - 0.5, -1.0)
    root_binom = np.sqrt([comb(two_s, round(s - mi)) for mi in m])
    msum = m[:, None] + m[None, :]
    integrals = 2.0 * beta_fn(s - msum / 2.0 + 1.0, s + msum / 2.0 + 1.0)
    return root_binom[:, None] * root_binom[None, :] * integrals


def _exact_theta_marginal(rho, alg, grid):
    """Closed-form int_0^pi Q(theta, phi_j) sin(theta) dtheta per phi node."""
    weights = rho * _dicke_overlap_integrals(round(2 * alg.spin))
    phases = np.exp(1j * np.outer(grid.phi_nodes, alg.m_values))
    marginal = np.einsum("jm,mn,jn->j", phases, weights, phases.conj(), optimize=True)
    if np.max(np.abs(marginal.imag)) > 1e-12:
        raise ValueError("theta marginal acquired an imaginary part beyond rounding")
    return marginal.real * (alg.dim / (4.0 * np.pi))


def coherent_amplitudes(alg, grid):
    """Amplitude table psi[i, j, m] = <m|theta_i, phi_j> for every grid node.

    Computing this once and passing it to husimi_q amortizes the Sy
    eigendecomposition and the phase table over many density matrices
    evaluated on the same grid (trajectories, parameter sweeps).
    """
    evals, evecs = np.linalg.eigh(alg.sy)
    phases = np.exp(-1j * np.outer(grid.theta_nodes, evals))
    # column m=S of d(theta) for all thetas at once: d[:, 0] = V (p * conj(V[0, :]))
    cols = (phases * evecs[0, :].conj()) @ evecs.T
    if np.max(np.abs(cols.imag)) > 1e-12:
        raise ArithmeticError("rotation amplitudes acquired an imaginary part")
    azimuth = np.exp(-1j * np.outer(grid.phi_nodes, alg.m_values))
    return cols.real[:, None, :] * azimuth[None, :, :]


def husimi_q(rho, alg, grid, amplitudes=None):
    """Evaluate Q(theta, phi) = (2S+1)/(4 pi) <theta,phi| rho |theta,phi>.

    Q is normalized (its sphere quadrature equals tr(rho)) but is not a
    probability density for any projective measurement; it is the diagonal
    of rho in the overcomplete coherent-state family.

    Parameters
    ----------
    rho : array_like
        Density matrix, shape (2S+1, 2S+1), Hermitian with unit trace.
    alg : SpinAlgebra
    grid : SphereGrid
    amplitudes : np.ndarray, optional
        Precomputed coherent_amplitudes(alg, grid).

    Raises
    ------
    ValueError
        On shape mismatch, non-Hermitian or badly normalized rho, values
        below -1e-12 (rho not positive), or a quadrature defect above 1e-10
        (grid too coarse for this spin).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (alg.dim, alg.dim):
        raise ValueError(f"rho has shape {rho.shape}, expected ({alg.dim}, {alg.dim})")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise ValueError("rho is not Hermitian")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > 1e-9:
        raise ValueError(f"rho trace {trace} is not 1 within 1e-9")
    psi = coherent_amplitudes(alg, grid) if amplitudes is None else amplitudes
    vals = np.einsum("ijm,mn,ijn->ij", psi.conj(), rho, psi, optimize=True)
    if np.max(np.abs(vals.imag)) > 1e-12:
        raise ValueError("Q acquired an imaginary part beyond rounding")
    q = vals.real * (alg.dim / (4.0 * np.pi))
    qmin = float(np.min(q))
    if qmin < -1e-12:
        raise ValueError(f"Q reaches {qmin:.3e} < -1e-12; rho is not positive")
    np.clip(q, 0.0, None, out=q)
    total = sphere_integral(grid, q)
    if abs(total - trace.real) > 1e-10:
        raise ValueError(
            f"Q quadrature {total!r} misses tr(rho) by more than 1e-10; "
            "use n_theta >= 2S+2 and n_phi > 4S+1"
        )
    marginal = _exact_theta_marginal(rho, alg, grid)
    return QField(grid=grid, values=q, theta_marginal=marginal)


def sphere_integral(grid, values):
    """Quadrature of values[i, j] over the sphere (sin(theta) measure included)."""
    return float(grid.theta_weights @ values.sum(axis=1)) * grid.phi_spacing


def sync_measure(q):
    """Reduce a Q field to the phase distribution S(phi).

    S(phi) = integral_0^pi Q(theta, phi) sin(theta) dtheta - 1/(2 pi), taken
    from the field's exact theta marginal. The offset makes S identically
    zero for phase-symmetric states, so any structure in S is phase locking.
    By construction S integrates to zero over the full azimuth range.
    """
    svals = q.theta_marginal - 1.0 / (2.0 * np.pi)
    total = float(np.sum(svals)) * q.grid.phi_spacing
    if abs(total) > 1e-10:
        raise ValueError(f"S(phi) integrates to {total:.3e}, expected 0 within 1e-10")
    return PhaseDistribution(phi_nodes=q.grid.phi_nodes.copy(), values=svals)


def peak(dist):
    """Locate the maximum of S(phi); returns (phi_star, s_max).

    Ties resolve to the smallest phi node (np.argmax picks the first
    maximizer), so an identically zero distribution reports (0.0, 0.0).
    """
    if dist.values.size == 0:
        raise ValueError("empty phase distribution")
    idx = int(np.argmax(dist.values))
    return float(dist.phi_nodes[idx]), float(dist.values[idx])
