import numpy as np
import pytest
from scipy.integrate import quad

import spinsync.experiments as experiments
from spinsync import (
    SphereDirection,
    SteadyStateError,
    SweepSpec,
    SystemParams,
    analytic_sdot,
    analytic_steady_s,
    arnold_sweep,
    breakdown_scan,
    build_spin_algebra,
    first_order_consistency,
    husimi_q,
    make_grid,
    peak,
    qubit_nogo_report,
    spin_comparison,
    steady_state,
    sync_measure,
)

BASE = SystemParams(spin=1, delta=0.0, epsilon=0.01, gamma_g=0.1, gamma_d=1.0)


def locked_peak(params, n_theta=64, n_phi=360):
    alg = build_spin_algebra(params.spin)
    grid = make_grid(n_theta, n_phi)
    q = husimi_q(steady_state(params), alg, grid)
    return peak(sync_measure(q))


def test_analytic_sdot_values_and_shape():
    p = BASE
    assert analytic_sdot(0.0, 0.0, p) == 0.0
    t = 3.0
    expected = (3 * 0.01 / 16) * (np.exp(-0.05 * t) - np.exp(-0.5 * t))
    assert analytic_sdot(0.0, t, p) == pytest.approx(expected, rel=1e-14)
    grid_vals = analytic_sdot(np.linspace(0, 2 * np.pi, 7), t, p)
    assert grid_vals.shape == (7,)
    balanced = SystemParams(spin=1, delta=0, epsilon=0.01, gamma_g=1.0, gamma_d=1.0)
    assert analytic_sdot(1.0, 5.0, balanced) == 0.0
    with pytest.raises(ValueError):
        analytic_sdot(0.0, 1.0, SystemParams(2, 0, 0.01, 0.1, 1.0))


def test_analytic_sdot_detuning_rotates_the_peak():
    p = SystemParams(spin=1, delta=0.3, epsilon=0.01, gamma_g=0.1, gamma_d=1.0)
    t = 2.0
    phi = np.linspace(0, 2 * np.pi, 360, endpoint=False)
    vals = analytic_sdot(phi, t, p)
    assert phi[np.argmax(vals)] == pytest.approx(p.delta * t % (2 * np.pi), abs=0.02)


def test_analytic_steady_matches_time_integral_of_sdot():
    # independent oracle: quadrature of the rate formula over all time
    p = BASE
    for phi in (0.0, 0.9, np.pi / 2, 2.5):
        integral, err = quad(lambda t: analytic_sdot(phi, t, p), 0.0, np.inf)
        assert err < 1e-8
        assert analytic_steady_s(phi, p) == pytest.approx(integral, abs=1e-8)


def test_analytic_steady_frozen_value_and_errors():
    # (3 eps / 8)(1/gamma_g - 1/gamma_d) at eps=0.01, gamma_g=0.1, gamma_d=1
    assert analytic_steady_s(0.0, BASE) == pytest.approx(0.03375, abs=1e-15)
    assert analytic_steady_s(np.pi / 2, BASE) == pytest.approx(0.0, abs=1e-15)
    balanced = SystemParams(spin=1, delta=0, epsilon=0.01, gamma_g=0.5, gamma_d=0.5)
    assert analytic_steady_s(0.0, balanced) == 0.0
    with pytest.raises(ValueError):
        analytic_steady_s(0.0, SystemParams(2, 0, 0.01, 0.1, 1.0))
    with pytest.raises(ValueError):
        analytic_steady_s(0.0, SystemParams(1, 0.5, 0.01, 0.1, 1.0))
    with pytest.raises(ValueError):
        analytic_steady_s(0.0, SystemParams(1, 0.0, 0.01, 0.0, 1.0))


def test_first_order_consistency_weak_signal():
    p = SystemParams(spin=1, delta=0.0, epsilon=0.001, gamma_g=0.1, gamma_d=1.0)
    dev = first_order_consistency(p, t_final=20.0, n_steps=2000)
    assert dev <= 0.05
    half = SystemParams(spin=1, delta=0.0, epsilon=0.0005, gamma_g=0.1, gamma_d=1.0)
    dev_half = first_order_consistency(half, t_final=20.0, n_steps=2000)
    # the relative deviation is first order in epsilon
    assert 0.35 < dev_half / dev < 0.65


def test_first_order_consistency_balanced_rates_is_second_order():
    # balanced rates: the formula is identically zero and the raw residual
    # rate is O(eps^2)
    p = SystemParams(spin=1, delta=0.0, epsilon=0.001, gamma_g=1.0, gamma_d=1.0)
    dev = first_order_consistency(p, t_final=10.0, n_steps=1000)
    assert dev < 1.0 * p.epsilon**2
    half = SystemParams(spin=1, delta=0.0, epsilon=0.0005, gamma_g=1.0, gamma_d=1.0)
    dev_half = first_order_consistency(half, t_final=10.0, n_steps=1000)
    assert 0.15 < dev_half / dev < 0.35


def test_first_order_consistency_input_validation():
    with pytest.raises(ValueError, match="weak"):
        first_order_consistency(
            SystemParams(1, 0, 0.5, 0.1, 1.0), t_final=1.0, n_steps=100
        )
    with pytest.raises(ValueError, match="spin 1"):
        first_order_consistency(
            SystemParams(2, 0, 0.001, 0.1, 1.0), t_final=1.0, n_steps=100
        )
    with pytest.raises(ValueError, match="stencil"):
        first_order_consistency(BASE, t_final=1.0, n_steps=100, eval_stride=60)


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(base=BASE, deltas=(), epsilons=(0.1,))
    with pytest.raises(ValueError):
        SweepSpec(base=BASE, deltas=(0.0,), epsilons=(-0.1,))
    bad_base = SystemParams(spin=1, delta=0, epsilon=0, gamma_g=0.0, gamma_d=1.0)
    with pytest.raises(ValueError):
        SweepSpec(base=bad_base, deltas=(0.0,), epsilons=(0.1,))


def test_arnold_sweep_rows_follow_spec_order():
    spec = SweepSpec(base=BASE, deltas=(-0.5, 0.0, 0.5), epsilons=(0.05, 0.1),
                     n_theta=32, n_phi=90)
    result = arnold_sweep(spec)
    assert [(r.delta, r.epsilon) for r in result.rows] == [
        (-0.5, 0.05), (-0.5, 0.1), (0.0, 0.05), (0.0, 0.1), (0.5, 0.05), (0.5, 0.1)
    ]
    assert all(r.error is None for r in result.rows)
    assert all(r.equator_weight is None for r in result.rows)


def test_arnold_sweep_locking_value_on_resonance():
    # epsilon = 0.1 gamma_min = 0.1 gamma_g reproduces the locked peak height
    spec = SweepSpec(base=BASE, deltas=(0.0,), epsilons=(0.1,))
    row = arnold_sweep(spec).rows[0]
    assert row.phi_star == 0.0
    assert row.s_max == pytest.approx(0.032, abs=0.003)
    assert abs(row.mean_sz) < 0.05


def test_arnold_sweep_is_even_in_detuning():
    deltas = (-1.5, -0.5, 0.5, 1.5)
    spec = SweepSpec(base=BASE, deltas=deltas, epsilons=(0.05, 0.1),
                     n_theta=32, n_phi=90)
    rows = arnold_sweep(spec).rows
    smax = np.array([r.s_max for r in rows]).reshape(len(deltas), 2)
    np.testing.assert_allclose(smax, smax[::-1, :], atol=1e-8)


def test_arnold_sweep_tongue_monotonicity():
    deltas = tuple(np.linspace(0.0, 2.0, 6))
    epsilons = tuple(np.linspace(0.02, 0.1, 5))
    spec = SweepSpec(base=BASE, deltas=deltas, epsilons=epsilons,
                     n_theta=32, n_phi=90)
    rows = arnold_sweep(spec).rows
    smax = np.array([r.s_max for r in rows]).reshape(len(deltas), len(epsilons))
    assert np.all(np.diff(smax, axis=0) <= 1e-10)   # decays away from resonance
    assert np.all(np.diff(smax, axis=1) >= -1e-10)  # grows with signal strength


def test_arnold_sweep_threads_match_serial():
    spec = SweepSpec(base=BASE, deltas=(-0.4, 0.3), epsilons=(0.05, 0.1),
                     n_theta=32, n_phi=90)
    serial = arnold_sweep(spec, threads=1)
    threaded = arnold_sweep(spec, threads=4)
    for a, b in zip(serial.rows, threaded.rows):
        assert a == b


def test_sweep_records_point_failures_without_aborting(monkeypatch):
    real = experiments.steady_state

    def flaky(params, backend="eigen"):
        if params.epsilon == 0.05 * BASE.gamma_min:
            raise SteadyStateError("synthetic failure")
        return real(params, backend=backend)

    monkeypatch.setattr(experiments, "steady_state", flaky)
    spec = SweepSpec(base=BASE, deltas=(0.0,), epsilons=(0.05, 0.1),
                     n_theta=32, n_phi=90)
    rows = arnold_sweep(spec).rows
    assert rows[0].error == "synthetic failure"
    assert np.isnan(rows[0].s_max) and np.isnan(rows[0].mean_sz)
    assert rows[1].error is None and rows[1].s_max > 0


def test_gain_damping_swap_mirrors_the_locking_phase():
    # swapping gamma_g and gamma_d moves the peak from 0 to pi at equal height
    p_gain_weak = SystemParams(spin=1, delta=0, epsilon=0.01, gamma_g=0.1, gamma_d=1.0)
    p_damp_weak = SystemParams(spin=1, delta=0, epsilon=0.01, gamma_g=1.0, gamma_d=0.1)
    phi1, s1 = locked_peak(p_gain_weak)
    phi2, s2 = locked_peak(p_damp_weak)
    assert phi1 == 0.0
    assert abs(phi2 - np.pi) < 1e-12
    assert abs(s1 - s2) < 1e-8


def test_rate_rescaling_leaves_the_steady_state_unchanged():
    # L is linear in (delta, epsilon, gamma_g, gamma_d); scaling all rates
    # rescales time but not the steady state
    p = SystemParams(spin=1, delta=0.02, epsilon=0.01, gamma_g=0.1, gamma_d=1.0)
    q = SystemParams(spin=1, delta=0.2, epsilon=0.1, gamma_g=1.0, gamma_d=10.0)
    assert np.max(np.abs(steady_state(p) - steady_state(q))) < 1e-10


def test_halving_epsilon_halves_the_peak_in_the_weak_regime():
    phi1, s1 = locked_peak(SystemParams(1, 0, 0.01, 0.1, 1.0))
    phi2, s2 = locked_peak(SystemParams(1, 0, 0.005, 0.1, 1.0))
    assert abs(s2 / s1 - 0.5) < 0.05 * 0.5


def test_breakdown_scan_requires_resonance():
    with pytest.raises(ValueError):
        breakdown_scan(SystemParams(1, 0.5, 0.01, 0.1, 1.0), [0.1])


def test_breakdown_scan_pushes_the_spin_off_the_equator():
    result = breakdown_scan(BASE, [0.01, 1.0], n_theta=64, n_phi=180)
    weak, strong = result.rows
    assert weak.epsilon == 0.01 and strong.epsilon == 1.0
    assert abs(strong.mean_sz) > 10 * abs(weak.mean_sz)
    assert strong.equator_weight < weak.equator_weight
    flipped = SystemParams(spin=1, delta=0, epsilon=0.01, gamma_g=10.0, gamma_d=1.0)
    result2 = breakdown_scan(flipped, [0.01, 1.0], n_theta=64, n_phi=180)
    # gain excess pushes <Sz> up, damping excess pushes it down
    assert np.sign(result2.rows[1].mean_sz) == -np.sign(strong.mean_sz)
    assert result2.rows[1].mean_sz > 0


def test_breakdown_scan_vanishing_signal_keeps_the_cycle_intact():
    result = breakdown_scan(BASE, [0.0], n_theta=32, n_phi=90)
    row = result.rows[0]
    assert abs(row.mean_sz) < 1e-10
    assert row.s_max < 1e-12


def test_spin_comparison_reports_resonant_peaks():
    pairs = spin_comparison([1, 2], BASE)
    assert pairs[0][0] == 1.0 and pairs[1][0] == 2.0
    assert pairs[0][1] == pytest.approx(0.032, abs=0.003)
    assert pairs[1][1] == pytest.approx(0.001, abs=0.0005)
    with pytest.raises(ValueError):
        spin_comparison([1.5], BASE)


def test_spin_comparison_ignores_base_detuning():
    detuned = SystemParams(spin=1, delta=0.7, epsilon=0.01, gamma_g=0.1, gamma_d=1.0)
    pairs = spin_comparison([1], detuned)
    assert pairs[0][1] == pytest.approx(0.032, abs=0.003)


def test_qubit_nogo_report_axis_z():
    report = qubit_nogo_report(SphereDirection(0.0, 0.0), n_lambda=5,
                               n_theta=32, n_phi=90)
    assert report["verdict"] == "extremal_only"
    assert report["max_bloch_deviation"] < 1e-12
    assert report["max_q_phi_variation"] < 1e-12
    assert report["lambdas"][0] == -1.0 and report["lambdas"][-1] == 1.0


def test_qubit_nogo_report_tilted_axis():
    rng = np.random.default_rng(19)
    axis = SphereDirection(theta=float(np.arccos(rng.uniform(-1, 1))),
                           phi=float(rng.uniform(0, 2 * np.pi)))
    report = qubit_nogo_report(axis, n_lambda=7, n_theta=32, n_phi=90)
    assert report["max_bloch_deviation"] < 1e-12
    assert report["max_q_phi_variation"] < 1e-12
    assert report["verdict"] == "extremal_only"
    with pytest.raises(ValueError):
        qubit_nogo_report(axis, n_lambda=1)
