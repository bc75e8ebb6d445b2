"""Spin operators, Wigner rotations, and spin coherent states.

All matrices are dense complex arrays in the Dicke basis |S, m> ordered by
descending m = S, S-1, ..., -S, with hbar = 1. Dimensions stay small
(2S+1 <= ~13 in practice), so exact dense linear algebra is used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpinAlgebra",
    "SphereDirection",
    "check_spin",
    "build_spin_algebra",
    "wigner_small_d",
    "coherent_state",
    "coherent_overlap",
    "free_evolve",
]


def check_spin(spin):
    """Validate a spin quantum number, returning it rounded to an exact half-integer.

    Raises ValueError for anything that is not a positive integer or
    half-integer (within 1e-12).
    """
    two_s = 2.0 * float(spin)
    if not np.isfinite(two_s) or abs(two_s - round(two_s)) > 1e-12 or round(two_s) < 1:
        raise ValueError(
            f"spin must be a positive half-integer (1/2, 1, 3/2, ...), got {spin!r}"
        )
    return round(two_s) / 2.0


@dataclass(frozen=True)
class SpinAlgebra:
    """Spin-S operator set in the Dicke basis, basis index 0 <-> m = S.

    Attributes
    ----------
    spin : float
        Spin quantum number S (positive half-integer).
    dim : int
        Hilbert space dimension 2S+1.
    sx, sy, sz, sp, sm : np.ndarray
        Dense complex (dim, dim) matrices. sz is diagonal with entries
        S, ..., -S; sp and sm raise and lower m.
    """

    spin: float
    dim: int
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    sp: np.ndarray
    sm: np.ndarray

    @property
    def m_values(self):
        """Eigenvalues of sz in basis order (descending)."""
        return np.arange(self.spin, -self.spin - 0.5, -1.0)


@dataclass(frozen=True)
class SphereDirection:
    """A direction on the unit sphere: polar angle theta in [0, pi], azimuth phi.

    phi is stored reduced to [0, 2*pi).
    """

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        if not 0.0 <= theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * np.pi))

    @property
    def unit_vector(self):
        st = np.sin(self.theta)
        return np.array(
            [st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)]
        )


def build_spin_algebra(spin):
    """Construct the spin-S operator matrices.

    Ladder matrix elements follow <S,m+1|S+|S,m> = sqrt(S(S+1) - m(m+1));
    with the descending basis ordering this places S+ on the superdiagonal.
    """
    s = check_spin(spin)
    dim = round(2 * s) + 1
    m = np.arange(s, -s - 0.5, -1.0)
    sz = np.diag(m.astype(complex))
    sp = np.zeros((dim, dim), dtype=complex)
    for i in range(1, dim):
        sp[i - 1, i] = np.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
    sm = sp.conj().T
    return SpinAlgebra(
        spin=s,
        dim=dim,
        sx=(sp + sm) / 2.0,
        sy=(sp - sm) / 2.0j,
        sz=sz,
        sp=sp,
        sm=sm,
    )


def wigner_small_d(spin, theta):
    """Rotation matrix d^S_{m',m}(theta) = <S,m'| exp(-i theta Sy) |S,m>.

    Computed from the eigendecomposition of Sy rather than the factorial sum,
    which is exact at these dimensions and free of large-S cancellation. The
    result is real and orthogonal.
    """
    alg = build_spin_algebra(spin)
    evals, evecs = np.linalg.eigh(alg.sy)
    d = (evecs * np.exp(-1j * float(theta) * evals)) @ evecs.conj().T
    if np.max(np.abs(d.imag)) > 1e-12:
        raise ArithmeticError("rotation matrix acquired an imaginary part")
    return d.real


def coherent_state(alg, direction):
    """Spin coherent state |theta, phi> = exp(-i phi Sz) exp(-i theta Sy) |S, S>.

    Component m of the returned vector is exp(-i m phi) d^S_{m,S}(theta);
    the exp(-i m phi) phases are kept exactly as written (no re-phasing), so
    downstream interference terms carry the correct relative phases.
    """
    d = wigner_small_d(alg.spin, direction.theta)
    return np.exp(-1j * alg.m_values * direction.phi) * d[:, 0]


def coherent_overlap(alg, dir1, dir2):
    """Overlap <dir1|dir2> of two spin coherent states.

    Its squared modulus equals ((1 + n1 . n2) / 2)^(2S) for the corresponding
    unit vectors, so distinct directions are never orthogonal.
    """
    return complex(np.vdot(coherent_state(alg, dir1), coherent_state(alg, dir2)))


def free_evolve(alg, state, omega0, t):
    """Apply the free evolution exp(-i omega0 t Sz) to a state vector.

    Coherent states precess rigidly: |theta, phi> maps to
    |theta, phi + omega0 t> up to the usual m-dependent phases.
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (alg.dim,):
        raise ValueError(f"state must have shape ({alg.dim},), got {state.shape}")
    if abs(np.linalg.norm(state) - 1.0) > 1e-12:
        raise ValueError("state vector is not normalized")
    return np.exp(-1j * alg.m_values * omega0 * t) * state
