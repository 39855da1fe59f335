import numpy as np
import pytest
import scipy.linalg

from qtopo.dynamics import evolve, liouvillian_gap, steady_state
from qtopo.errors import DegenerateSteadyState, NumericsError
from qtopo.liouvillian import build_liouvillian, vec
from qtopo.metrics import fidelity, purity
from qtopo.params import MasterEqParams, dark_state_bell_params
from qtopo.states import bell_state, ket

from test_liouvillian import random_params, single_decay_params

# Analytic steady state of the dark-state reference model:
# |gg> + sqrt(2)*(0.7/0.2) |+-> up to normalisation.
F_DARK = 24.5 / 25.5
NG_DARK = 1.0 / 25.5


def eig_steady_state(lv):
    """Independent oracle: null vector from a full eigendecomposition."""
    w, v = scipy.linalg.eig(lv)
    rho = v[:, np.argmin(np.abs(w))]
    d = int(round(np.sqrt(rho.size)))
    rho = rho.reshape((d, d), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def test_single_qubit_steady_state():
    lv = build_liouvillian(single_decay_params())
    rho = steady_state(lv)
    assert np.allclose(rho, np.diag([1.0, 0.0]), atol=1e-12)


def test_dark_state_fidelity_and_purity():
    lv = build_liouvillian(dark_state_bell_params())
    rho = steady_state(lv)
    f = fidelity(rho, bell_state(-1))
    assert abs(f - F_DARK) < 1e-9
    assert purity(rho) >= 0.98
    assert abs(rho[0, 0].real - NG_DARK) < 1e-9


def test_steady_state_matches_eigen_oracle():
    rng = np.random.default_rng(11)
    for n in (1, 2, 3):
        for _ in range(3):
            lv = build_liouvillian(random_params(rng, n))
            rho = steady_state(lv)
            oracle = eig_steady_state(lv)
            assert np.max(np.abs(rho - oracle)) < 1e-8


def test_steady_state_residual_and_positivity():
    rng = np.random.default_rng(3)
    for _ in range(5):
        lv = build_liouvillian(random_params(rng, 2))
        rho = steady_state(lv)
        assert np.linalg.norm(lv @ vec(rho)) < 1e-9
        assert np.min(np.linalg.eigvalsh(rho)) > -1e-8
        assert abs(np.trace(rho) - 1.0) < 1e-10


def test_degenerate_null_space_detected():
    # Only qubit 1 decays and nothing couples qubit 2: every state of the
    # second qubit is stationary, so the null space is 4-dimensional.
    from qtopo.liouvillian import lindblad_superoperator, lowering_ops

    sigma1 = lowering_ops(2)[0]
    lv = lindblad_superoperator(np.zeros((4, 4), dtype=complex), [sigma1])
    with pytest.raises(DegenerateSteadyState) as err:
        steady_state(lv)
    assert err.value.null_dim == 4


def test_evolve_identity_at_t_zero():
    lv = build_liouvillian(dark_state_bell_params())
    rho0 = np.outer(ket("gg"), ket("gg").conj())
    out = evolve(lv, rho0, np.array([0.0]))
    assert np.array_equal(out[0], rho0)


def test_evolve_analytic_decay():
    gamma = 1.0
    lv = build_liouvillian(single_decay_params(gamma))
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    times = np.array([0.1, 0.5, 1.0, 2.0, 5.0])
    states = evolve(lv, rho0, times)
    for t, rho in zip(times, states):
        assert abs(rho[1, 1].real - np.exp(-gamma * t)) < 1e-8
        assert abs(np.trace(rho) - 1.0) < 1e-8


def test_evolve_rejects_bad_time_grid():
    lv = build_liouvillian(single_decay_params())
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        evolve(lv, rho0, np.array([1.0, 0.5]))
    with pytest.raises(ValueError):
        evolve(lv, rho0, np.array([-1.0, 0.5]))


def test_evolve_dark_state_transient_shape():
    # Ground-state start: the even Bell population peaks early (metastable
    # plateau) while the odd population rises only later, approaching its
    # steady value.
    lv = build_liouvillian(dark_state_bell_params())
    rho0 = np.outer(ket("gg"), ket("gg").conj())
    times = np.logspace(-1, 3, 30)
    states = evolve(lv, rho0, times)
    n_pp = np.array([fidelity(r, bell_state(+1)) for r in states])
    n_pm = np.array([fidelity(r, bell_state(-1)) for r in states])
    assert n_pm[times <= 1.0].max() < 0.01  # delayed rise
    assert n_pp[(times >= 1.0) & (times <= 10.0)].max() > 0.25  # early plateau
    assert n_pm[-1] > 0.95  # approaches the steady value
    t_peak_pp = times[np.argmax(n_pp)]
    t_half_pm = times[np.searchsorted(n_pm, 0.5 * n_pm[-1])]
    assert t_peak_pp < t_half_pm


def test_evolve_converges_to_steady_state():
    lv = build_liouvillian(dark_state_bell_params())
    rho_ss = steady_state(lv)
    gap, tau = liouvillian_gap(lv)
    rho0 = np.outer(ket("gg"), ket("gg").conj())
    rho_t = evolve(lv, rho0, np.array([20.0 * tau]))[0]
    trace_norm = np.sum(np.abs(np.linalg.eigvalsh(rho_t - rho_ss)))
    assert trace_norm < 1e-6


def test_gap_single_decaying_qubit():
    # Analytic spectrum {0, -gamma/2, -gamma/2, -gamma}.
    lv = build_liouvillian(single_decay_params())
    gap, tau = liouvillian_gap(lv)
    assert abs(gap - 0.5) < 1e-12
    assert abs(tau - 2.0) < 1e-11


def test_gap_dark_state_model_purcell_suppressed():
    # With the collective rate suppressed to 0.05 gamma_0 (the regime the
    # designed cavities reach at large separations) the preparation time
    # lands in the 1e2-1e3 range reported for phenomenological dark-state
    # models.
    p = dark_state_bell_params(gamma=0.05)
    gap, tau = liouvillian_gap(build_liouvillian(p))
    assert 1e2 <= tau <= 3e3


def test_gap_positive_for_full_rank_gamma():
    rng = np.random.default_rng(21)
    for _ in range(5):
        p = random_params(rng, 2)
        gap, tau = liouvillian_gap(build_liouvillian(p))
        assert gap > 0.0
        assert tau == pytest.approx(1.0 / gap)


def test_gap_error_when_no_decay():
    lv = np.zeros((4, 4), dtype=complex)
    with pytest.raises(NumericsError):
        liouvillian_gap(lv)
