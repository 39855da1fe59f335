import numpy as np
import pytest

from qtopo.liouvillian import build_liouvillian, unvec, vec
from qtopo.params import MasterEqParams, dark_state_bell_params


def single_decay_params(gamma=1.0):
    return MasterEqParams(
        delta=[0.0], omega_drive=[0.0], g=np.zeros((1, 1)), gamma=[[gamma]]
    )


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def random_params(rng, n):
    a = rng.normal(size=(n, n))
    gamma = a @ a.T + 0.1 * np.eye(n)
    g = rng.normal(size=(n, n))
    g = 0.5 * (g + g.T)
    np.fill_diagonal(g, 0.0)
    return MasterEqParams(
        delta=rng.normal(size=n),
        omega_drive=rng.normal(size=n),
        g=g,
        gamma=gamma,
    )


def test_vec_is_column_stacking():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(vec(m), [1.0, 3.0, 2.0, 4.0])
    assert np.array_equal(unvec(vec(m)), m)


def test_single_decaying_qubit_superoperator():
    lv = build_liouvillian(single_decay_params())
    assert lv.shape == (4, 4)
    # d(rho_gg)/dt = gamma rho_ee; coherences decay at gamma/2.
    rho = np.array([[0.25, 0.5], [0.5, 0.75]], dtype=complex)
    drho = unvec(lv @ vec(rho))
    assert np.allclose(drho, [[0.75, -0.25], [-0.25, -0.75]])


def test_trace_preservation_random_hermitian():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        p = random_params(rng, n)
        lv = build_liouvillian(p)
        for _ in range(100 // n):
            rho = random_hermitian(rng, 2**n)
            assert abs(np.trace(unvec(lv @ vec(rho)))) < 1e-10


def test_rejects_non_psd_gamma():
    p = MasterEqParams(
        delta=[0.0, 0.0],
        omega_drive=[0.0, 0.0],
        g=np.zeros((2, 2)),
        gamma=[[1.0, 1.5], [1.5, 1.0]],
    )
    with pytest.raises(ValueError, match="positive semi-definite"):
        build_liouvillian(p)


def test_rejects_nonpositive_diagonal():
    p = MasterEqParams(
        delta=[0.0, 0.0],
        omega_drive=[0.0, 0.0],
        g=np.zeros((2, 2)),
        gamma=[[1.0, 0.0], [0.0, 0.0]],
    )
    with pytest.raises(ValueError, match="diagonal"):
        build_liouvillian(p)


def test_analytic_dark_state_is_annihilated():
    # |gg> + 3.5 (|ge> - |eg>) is an exact zero mode of the reference
    # dark-state Liouvillian (in-phase drive, maximal dissipative coupling).
    lv = build_liouvillian(dark_state_bell_params())
    psi = np.array([1.0, 3.5, -3.5, 0.0], dtype=complex)
    psi /= np.linalg.norm(psi)
    rho = np.outer(psi, psi.conj())
    assert np.linalg.norm(lv @ vec(rho)) < 1e-12


def test_collective_rate_geometric_mean():
    p = MasterEqParams(
        delta=[0.0, 0.0],
        omega_drive=[0.0, 0.0],
        g=np.zeros((2, 2)),
        gamma=[[4.0, 0.0], [0.0, 1.0]],
    )
    assert abs(p.collective_rate() - 2.0) < 1e-12
