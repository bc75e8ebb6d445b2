import numpy as np
import pytest
from scipy.linalg import expm

from spinsync import (
    SphereDirection,
    build_spin_algebra,
    check_spin,
    coherent_amplitudes,
    coherent_overlap,
    coherent_state,
    free_evolve,
    make_grid,
    wigner_small_d,
)

SPINS = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]


def random_direction(rng):
    # uniform on the sphere: u = cos(theta) uniform in [-1, 1]
    return SphereDirection(theta=float(np.arccos(rng.uniform(-1, 1))),
                           phi=float(rng.uniform(0, 2 * np.pi)))


def test_check_spin_accepts_half_integers():
    assert check_spin(0.5) == 0.5
    assert check_spin(1) == 1.0
    assert check_spin(2.5) == 2.5
    assert check_spin(1.0 + 4e-13) == 1.0


@pytest.mark.parametrize("bad", [0, -1, 0.3, 2.25, np.nan, np.inf])
def test_check_spin_rejects_invalid(bad):
    with pytest.raises(ValueError):
        check_spin(bad)


def test_spin_half_matrices():
    alg = build_spin_algebra(0.5)
    assert alg.dim == 2
    np.testing.assert_allclose(alg.sz, np.diag([0.5, -0.5]), atol=1e-15)
    np.testing.assert_allclose(alg.sp, [[0, 1], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(alg.sx, [[0, 0.5], [0.5, 0]], atol=1e-15)
    np.testing.assert_allclose(alg.sy, [[0, -0.5j], [0.5j, 0]], atol=1e-15)


def test_spin_one_matrices():
    alg = build_spin_algebra(1)
    assert alg.dim == 3
    np.testing.assert_allclose(alg.sz, np.diag([1.0, 0.0, -1.0]), atol=1e-15)
    r2 = np.sqrt(2.0)
    np.testing.assert_allclose(alg.sp, [[0, r2, 0], [0, 0, r2], [0, 0, 0]], atol=1e-15)
    np.testing.assert_allclose(alg.m_values, [1.0, 0.0, -1.0], atol=0)


@pytest.mark.parametrize("spin", SPINS)
def test_commutators_and_casimir(spin):
    alg = build_spin_algebra(spin)
    eye = np.eye(alg.dim)
    for a, b, c in [(alg.sx, alg.sy, alg.sz), (alg.sy, alg.sz, alg.sx), (alg.sz, alg.sx, alg.sy)]:
        np.testing.assert_allclose(a @ b - b @ a, 1j * c, atol=1e-12)
    casimir = alg.sx @ alg.sx + alg.sy @ alg.sy + alg.sz @ alg.sz
    np.testing.assert_allclose(casimir, spin * (spin + 1) * eye, atol=1e-12)
    np.testing.assert_allclose(alg.sp, alg.sx + 1j * alg.sy, atol=1e-12)
    np.testing.assert_allclose(alg.sm, alg.sp.conj().T, atol=0)


def test_sphere_direction_wraps_phi_and_validates_theta():
    d = SphereDirection(theta=1.0, phi=7.0)
    assert 0.0 <= d.phi < 2 * np.pi
    assert abs(d.phi - (7.0 - 2 * np.pi)) < 1e-15
    np.testing.assert_allclose(SphereDirection(0.0, 0.0).unit_vector, [0, 0, 1], atol=1e-15)
    with pytest.raises(ValueError):
        SphereDirection(theta=-0.1, phi=0.0)
    with pytest.raises(ValueError):
        SphereDirection(theta=3.5, phi=0.0)


def test_wigner_d_identity_at_zero():
    for spin in SPINS:
        d = wigner_small_d(spin, 0.0)
        np.testing.assert_allclose(d, np.eye(round(2 * spin) + 1), atol=1e-14)


def test_wigner_d_matches_matrix_exponential():
    # independent route: brute-force expm of -i theta Sy
    rng = np.random.default_rng(7)
    for spin in SPINS:
        alg = build_spin_algebra(spin)
        for theta in rng.uniform(0, np.pi, size=4):
            d = wigner_small_d(spin, theta)
            ref = expm(-1j * theta * alg.sy)
            np.testing.assert_allclose(d, ref.real, atol=1e-12)
            assert np.max(np.abs(ref.imag)) < 1e-12


def test_wigner_d_spin_half_closed_form():
    theta = 0.8
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    np.testing.assert_allclose(wigner_small_d(0.5, theta), [[c, -s], [s, c]], atol=1e-14)


def test_wigner_d_spin_one_closed_form():
    # exact matrix in the (m = 1, 0, -1) ordering
    theta = 1.234
    c, s = np.cos(theta), np.sin(theta)
    r2 = np.sqrt(2.0)
    ref = np.array(
        [
            [(1 + c) / 2, -s / r2, (1 - c) / 2],
            [s / r2, c, -s / r2],
            [(1 - c) / 2, s / r2, (1 + c) / 2],
        ]
    )
    np.testing.assert_allclose(wigner_small_d(1, theta), ref, atol=1e-13)


def test_wigner_d_spin_one_quarter_and_half_turn():
    d90 = wigner_small_d(1, np.pi / 2)
    np.testing.assert_allclose(d90[:, 0], [0.5, 1 / np.sqrt(2), 0.5], atol=1e-13)
    d180 = wigner_small_d(1, np.pi)
    ref = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=float)
    np.testing.assert_allclose(d180, ref, atol=1e-13)


def test_wigner_d_real_orthogonal_and_group_property():
    rng = np.random.default_rng(11)
    for spin in SPINS:
        dim = round(2 * spin) + 1
        t1, t2 = rng.uniform(0, np.pi, size=2)
        d1, d2 = wigner_small_d(spin, t1), wigner_small_d(spin, t2)
        assert d1.dtype == np.float64
        np.testing.assert_allclose(d1 @ d1.T, np.eye(dim), atol=1e-12)
        np.testing.assert_allclose(d1 @ d2, wigner_small_d(spin, t1 + t2), atol=1e-12)


def test_coherent_state_poles():
    for spin in (0.5, 1.0, 2.0):
        alg = build_spin_algebra(spin)
        north = coherent_state(alg, SphereDirection(0.0, 0.0))
        expected = np.zeros(alg.dim)
        expected[0] = 1.0
        np.testing.assert_allclose(north, expected, atol=1e-13)
        south = coherent_state(alg, SphereDirection(np.pi, 0.0))
        expected = np.zeros(alg.dim)
        expected[-1] = 1.0
        np.testing.assert_allclose(np.abs(south), expected, atol=1e-13)


def test_coherent_state_equator_spin_one():
    alg = build_spin_algebra(1)
    psi = coherent_state(alg, SphereDirection(np.pi / 2, 0.0))
    np.testing.assert_allclose(psi, [0.5, 1 / np.sqrt(2), 0.5], atol=1e-13)
    # nonzero azimuth attaches exp(-i m phi) to component m
    phi = 0.9
    psi2 = coherent_state(alg, SphereDirection(np.pi / 2, phi))
    np.testing.assert_allclose(psi2, np.exp(-1j * np.array([1, 0, -1]) * phi) * psi, atol=1e-13)


def test_coherent_state_unit_norm_and_mean_direction():
    rng = np.random.default_rng(3)
    for spin in (0.5, 1.0, 2.0):
        alg = build_spin_algebra(spin)
        for _ in range(20):
            d = random_direction(rng)
            psi = coherent_state(alg, d)
            assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
            mean = np.array(
                [
                    np.vdot(psi, alg.sx @ psi).real,
                    np.vdot(psi, alg.sy @ psi).real,
                    np.vdot(psi, alg.sz @ psi).real,
                ]
            )
            np.testing.assert_allclose(mean, spin * d.unit_vector, atol=1e-12)


def test_overlap_same_direction_is_unity():
    rng = np.random.default_rng(5)
    for spin in (0.5, 1.0, 2.0):
        alg = build_spin_algebra(spin)
        d = random_direction(rng)
        assert abs(abs(coherent_overlap(alg, d, d)) - 1.0) < 1e-12


def test_overlap_law_random_pairs():
    # |<d1|d2>|^2 = ((1 + n1.n2)/2)^(2S), 100 pairs per spin
    rng = np.random.default_rng(42)
    for spin in (0.5, 1.0, 2.0):
        alg = build_spin_algebra(spin)
        for _ in range(100):
            d1, d2 = random_direction(rng), random_direction(rng)
            lhs = abs(coherent_overlap(alg, d1, d2)) ** 2
            rhs = ((1.0 + d1.unit_vector @ d2.unit_vector) / 2.0) ** (2 * spin)
            assert abs(lhs - rhs) < 1e-12


def test_overlap_antipodal_and_orthogonal_directions():
    alg = build_spin_algebra(1)
    north, south = SphereDirection(0.0, 0.0), SphereDirection(np.pi, 0.0)
    assert abs(coherent_overlap(alg, north, south)) < 1e-13
    equator = SphereDirection(np.pi / 2, 0.0)
    # perpendicular directions: (1/2)^(2S) = 1/4 at spin 1
    assert abs(abs(coherent_overlap(alg, north, equator)) ** 2 - 0.25) < 1e-13


def test_completeness_relation():
    # sum_ij w_i dphi |theta_i,phi_j><theta_i,phi_j| = 4 pi / (2S+1) * identity
    for spin in (0.5, 1.0, 2.0):
        alg = build_spin_algebra(spin)
        grid = make_grid(max(16, round(2 * spin) + 2), max(32, round(4 * spin) + 2))
        amps = coherent_amplitudes(alg, grid)
        weighted = grid.theta_weights[:, None, None] * amps
        resolved = np.einsum("ijm,ijn->mn", weighted, amps.conj()) * grid.phi_spacing
        target = 4.0 * np.pi / (2.0 * spin + 1.0) * np.eye(alg.dim)
        assert np.max(np.abs(resolved - target)) < 1e-10


def test_free_evolve_advances_phase():
    rng = np.random.default_rng(9)
    for spin in (0.5, 1.0, 2.0):
        alg = build_spin_algebra(spin)
        d = random_direction(rng)
        omega0, t = 1.7, 2.3
        evolved = free_evolve(alg, coherent_state(alg, d), omega0, t)
        target = coherent_state(alg, SphereDirection(d.theta, d.phi + omega0 * t))
        np.testing.assert_allclose(evolved, target, atol=1e-12)


def test_free_evolve_identity_and_validation():
    alg = build_spin_algebra(1)
    psi = coherent_state(alg, SphereDirection(1.0, 2.0))
    np.testing.assert_allclose(free_evolve(alg, psi, 3.0, 0.0), psi, atol=0)
    with pytest.raises(ValueError):
        free_evolve(alg, psi * 2.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        free_evolve(alg, np.ones(4) / 2.0, 1.0, 1.0)
