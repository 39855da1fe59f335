import numpy as np
import pytest

from qtopo.cavity import (
    SingleModeParams,
    adiabatic_elimination,
    build_single_mode_liouvillian,
    lorentzian_spectral_density,
    mode_number_operator,
    trace_out_mode,
)
from qtopo.dynamics import evolve
from qtopo.liouvillian import build_liouvillian
from qtopo.metrics import fidelity
from qtopo.states import bell_state, ket

# Lorentzian fit of the reference device: G_i = 7.75, Gamma_a = 2459
# (gamma_0 units).
FIT = dict(omega_a_minus_laser=0.0, Gamma_a=2459.0, G_couplings=[7.75, 7.75])


def ground_joint(n_max):
    mode_vac = np.zeros((n_max + 1, n_max + 1))
    mode_vac[0, 0] = 1.0
    return np.kron(np.outer(ket("gg"), ket("gg").conj()), mode_vac)


def bell_populations(rho_q):
    return np.array(
        [
            rho_q[0, 0].real,
            fidelity(rho_q, bell_state(+1)),
            fidelity(rho_q, bell_state(-1)),
            rho_q[3, 3].real,
        ]
    )


def test_lorentzian_peak_value():
    p = SingleModeParams(**FIT)
    peak = lorentzian_spectral_density(p, 0, 1, 0.0)
    assert peak == pytest.approx(2.0 * 7.75**2 / (np.pi * 2459.0), rel=1e-12)
    assert peak == pytest.approx(0.015550, abs=2e-6)


def test_lorentzian_symmetric_and_halfwidth():
    p = SingleModeParams(
        omega_a_minus_laser=3.0, Gamma_a=10.0, G_couplings=[1.0, 2.0]
    )
    assert lorentzian_spectral_density(p, 0, 1, 1.2) == lorentzian_spectral_density(
        p, 1, 0, 1.2
    )
    peak = lorentzian_spectral_density(p, 0, 1, 3.0)
    half = lorentzian_spectral_density(p, 0, 1, 3.0 + 5.0)
    assert half == pytest.approx(0.5 * peak, rel=1e-12)


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        SingleModeParams(omega_a_minus_laser=0.0, Gamma_a=-1.0, G_couplings=[1.0])
    with pytest.raises(ValueError):
        SingleModeParams(
            omega_a_minus_laser=0.0, Gamma_a=1.0, G_couplings=[1.0], n_max=0
        )


def test_zero_coupling_factorises():
    # With G_i = 0 the qubit dynamics must match the qubit-only model with
    # bare decay and no interactions.
    p = SingleModeParams(
        omega_a_minus_laser=50.0, Gamma_a=100.0, G_couplings=[0.0, 0.0], n_max=1
    )
    delta = np.array([0.3, -0.4])
    drive = np.array([0.6, 0.2])
    lv_joint = build_single_mode_liouvillian(p, delta, drive)
    from qtopo.params import MasterEqParams

    lv_q = build_liouvillian(
        MasterEqParams(
            delta=delta, omega_drive=drive, g=np.zeros((2, 2)), gamma=np.eye(2)
        )
    )
    times = np.array([0.5, 2.0, 10.0])
    joint = evolve(lv_joint, ground_joint(1), times)
    bare = evolve(lv_q, np.outer(ket("gg"), ket("gg").conj()), times)
    for a, b in zip(joint, bare):
        assert np.max(np.abs(trace_out_mode(a, p) - b)) < 1e-10


def test_adiabatic_elimination_formulas():
    p = SingleModeParams(
        omega_a_minus_laser=500.0, Gamma_a=2000.0, G_couplings=[5.0, 8.0]
    )
    eff = adiabatic_elimination(p, [0.1, -0.1], [0.5, 0.5])
    s = 500.0**2 + 1000.0**2
    assert eff.g[0, 1] == pytest.approx(5.0 * 8.0 * 500.0 / s, rel=1e-12)
    assert eff.gamma[0, 1] == pytest.approx(5.0 * 8.0 * 2000.0 / s, rel=1e-12)
    assert eff.gamma[0, 0] == pytest.approx(1.0 + 25.0 * 2000.0 / s, rel=1e-12)
    assert eff.delta[0] == pytest.approx(0.1 + 25.0 * 500.0 / s, rel=1e-12)


def test_single_mode_agrees_with_adiabatic_elimination():
    # Fitted parameters of the reference device; populations from the
    # joint model and the reduced two-level model must agree to 0.02.
    p = SingleModeParams(**FIT, n_max=3)
    delta = np.array([0.2, -0.2])
    drive = np.array([0.7, 0.7])
    lv_joint = build_single_mode_liouvillian(p, delta, drive)
    lv_q = build_liouvillian(adiabatic_elimination(p, delta, drive))
    times = np.logspace(-1, 3, 25)
    joint = evolve(lv_joint, ground_joint(3), times)
    bare = evolve(lv_q, np.outer(ket("gg"), ket("gg").conj()), times)
    max_dev = 0.0
    for a, b in zip(joint, bare):
        dev = np.max(
            np.abs(bell_populations(trace_out_mode(a, p)) - bell_populations(b))
        )
        max_dev = max(max_dev, dev)
    assert max_dev <= 0.02


def test_single_mode_detuned_cavity_agreement():
    # Nonzero cavity-laser detuning exercises the coherent-coupling and
    # Lamb-shift terms of the reduction.
    p = SingleModeParams(
        omega_a_minus_laser=800.0, Gamma_a=2459.0, G_couplings=[7.75, 7.75], n_max=2
    )
    delta = np.array([0.2, -0.2])
    drive = np.array([0.7, 0.7])
    lv_joint = build_single_mode_liouvillian(p, delta, drive)
    lv_q = build_liouvillian(adiabatic_elimination(p, delta, drive))
    times = np.logspace(-1, 3, 15)
    joint = evolve(lv_joint, ground_joint(2), times)
    bare = evolve(lv_q, np.outer(ket("gg"), ket("gg").conj()), times)
    for a, b in zip(joint, bare):
        dev = np.max(
            np.abs(bell_populations(trace_out_mode(a, p)) - bell_populations(b))
        )
        assert dev <= 0.02


def test_truncation_level_unpopulated():
    p = SingleModeParams(**FIT, n_max=3)
    lv = build_single_mode_liouvillian(p, [0.2, -0.2], [0.7, 0.7])
    top = np.kron(np.eye(4), np.diag([0.0, 0.0, 0.0, 1.0]))
    for rho in evolve(lv, ground_joint(3), np.logspace(-1, 3, 10)):
        assert np.real(np.trace(top @ rho)) < 1e-6


def test_mode_population_window_tracks_metastable_plateau():
    # Cavity-dominated decay (residual free-space rate suppressed): the
    # cavity population is non-negligible exactly while the even-Bell
    # plateau lasts, then decays as the pair settles into the dark state.
    p = SingleModeParams(
        omega_a_minus_laser=0.0,
        Gamma_a=2459.0,
        G_couplings=[7.75, 7.75],
        gamma0=5e-4,
        n_max=3,
    )
    gtot = p.gamma0 + 4.0 * 7.75**2 / 2459.0
    lv = build_single_mode_liouvillian(
        p, gtot * np.array([0.2, -0.2]), gtot * np.array([0.7, 0.7])
    )
    times = np.logspace(0, 4.6, 24)
    states = evolve(lv, ground_joint(3), times)
    n_op = mode_number_operator(p)
    n_a = np.array([np.real(np.trace(n_op @ r)) for r in states])
    n_pp = np.array(
        [fidelity(trace_out_mode(r, p), bell_state(+1)) for r in states]
    )
    n_pm = np.array(
        [fidelity(trace_out_mode(r, p), bell_state(-1)) for r in states]
    )
    k_a, k_pp = np.argmax(n_a), np.argmax(n_pp)
    assert abs(np.log10(times[k_a] / times[k_pp])) < 0.35  # windows coincide
    assert n_pm[k_a] < 0.1  # odd state still empty in the window
    assert n_a[-1] < 0.3 * n_a.max()  # mode empties afterwards
    assert n_pm[-1] > 0.75  # dark state reached
