"""Single-mode cavity model: Lorentzian spectral densities, the
qubits + mode master equation, and its adiabatic-elimination reduction
to the qubit-only model.

The joint Hilbert space orders the two qubits first (qubit 1 most
significant) and the bosonic mode last, truncated at `n_max` photons.
"""

from dataclasses import dataclass

import numpy as np

from .liouvillian import SIGMA_MINUS, _embed, lindblad_superoperator
from .params import MasterEqParams

__all__ = [
    "SingleModeParams",
    "lorentzian_spectral_density",
    "build_single_mode_liouvillian",
    "adiabatic_elimination",
    "mode_number_operator",
    "trace_out_mode",
]


@dataclass
class SingleModeParams:
    """Cavity-mode parameters fitted from Lorentzian spectral densities.

    Attributes
    ----------
    omega_a_minus_laser : float
        Mode detuning from the laser, omega_a - omega_L.
    Gamma_a : float
        Mode linewidth (> 0).
    G_couplings : (n,) array
        Qubit-mode coupling strengths.
    gamma0 : float
        Residual free-space decay rate per qubit (the unit, 1 by default).
    n_max : int
        Photon-number truncation (>= 1); validity requires negligible
        population at the truncation level, checked by the caller.
    """

    omega_a_minus_laser: float
    Gamma_a: float
    G_couplings: np.ndarray
    gamma0: float = 1.0
    n_max: int = 3

    def __post_init__(self):
        self.G_couplings = np.atleast_1d(np.asarray(self.G_couplings, dtype=float))
        if self.Gamma_a <= 0.0:
            raise ValueError("Gamma_a must be > 0")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def n_qubits(self) -> int:
        return self.G_couplings.shape[0]


def lorentzian_spectral_density(
    p: SingleModeParams, i: int, j: int, omega: float
) -> float:
    """Cross spectral density J_ij(omega) of the fitted single mode.

    J_ij(omega) = (G_i G_j / pi) * (Gamma_a/2) / ((omega - omega_a)^2
    + (Gamma_a/2)^2), with omega measured from the laser frequency.
    """
    half = 0.5 * p.Gamma_a
    det = omega - p.omega_a_minus_laser
    return float(
        p.G_couplings[i] * p.G_couplings[j] / np.pi * half / (det**2 + half**2)
    )


def _mode_ops(n_qubits: int, n_max: int):
    """Lowering operators for each qubit and the mode on the joint space."""
    dims = [2] * n_qubits + [n_max + 1]
    sigma = [_embed(SIGMA_MINUS, i, dims) for i in range(n_qubits)]
    a_local = np.diag(np.sqrt(np.arange(1, n_max + 1)), 1).astype(complex)
    a = _embed(a_local, n_qubits, dims)
    return sigma, a


def mode_number_operator(p: SingleModeParams) -> np.ndarray:
    """a^+ a on the joint qubits + mode space."""
    _, a = _mode_ops(p.n_qubits, p.n_max)
    return a.conj().T @ a


def build_single_mode_liouvillian(
    p: SingleModeParams, delta: np.ndarray, omega_drive: np.ndarray
) -> np.ndarray:
    """Vectorised Liouvillian of the qubits + mode master equation.

    The Hamiltonian is (omega_a - omega_L) a^+ a + sum_i delta_i n_i
    + sum_i G_i (s_i^+ a + a^+ s_i) + sum_i Omega_i (s_i^+ + s_i); the
    dissipator has the mode decaying at Gamma_a and each qubit at gamma0.
    """
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    omega_drive = np.atleast_1d(np.asarray(omega_drive, dtype=float))
    n = p.n_qubits
    if delta.shape != (n,) or omega_drive.shape != (n,):
        raise ValueError("delta and omega_drive must have one entry per qubit")
    sigma, a = _mode_ops(n, p.n_max)
    dim = sigma[0].shape[0]
    h = p.omega_a_minus_laser * (a.conj().T @ a)
    for i in range(n):
        h += delta[i] * (sigma[i].conj().T @ sigma[i])
        h += p.G_couplings[i] * (sigma[i].conj().T @ a + a.conj().T @ sigma[i])
        h += omega_drive[i] * (sigma[i] + sigma[i].conj().T)
    jumps = [np.sqrt(p.Gamma_a) * a]
    jumps += [np.sqrt(p.gamma0) * s for s in sigma]
    return lindblad_superoperator(h, jumps)


def adiabatic_elimination(
    p: SingleModeParams, delta: np.ndarray, omega_drive: np.ndarray
) -> MasterEqParams:
    """Qubit-only parameters equivalent to the single-mode model for
    G_i << Gamma_a.

    Eliminating the mode yields, with D = omega_a - omega_L and
    S = D^2 + (Gamma_a/2)^2:

        g_ij     = G_i G_j D / S          (i != j)
        gamma_ij = G_i G_j Gamma_a / S    (i != j)
        gamma_ii = gamma0 + G_i^2 Gamma_a / S
        delta_i -> delta_i + G_i^2 D / S  (mode-induced shift)
    """
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    omega_drive = np.atleast_1d(np.asarray(omega_drive, dtype=float))
    n = p.n_qubits
    det = p.omega_a_minus_laser
    denom = det**2 + (0.5 * p.Gamma_a) ** 2
    gg = np.outer(p.G_couplings, p.G_couplings)
    g = gg * det / denom
    np.fill_diagonal(g, 0.0)
    gamma = gg * p.Gamma_a / denom
    gamma += p.gamma0 * np.eye(n)
    shift = p.G_couplings**2 * det / denom
    return MasterEqParams(
        delta=delta + shift, omega_drive=omega_drive, g=g, gamma=gamma
    )


def trace_out_mode(rho: np.ndarray, p: SingleModeParams) -> np.ndarray:
    """Reduced qubit density matrix of a joint qubits + mode state."""
    n = p.n_qubits
    dq = 2**n
    dm = p.n_max + 1
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dq * dm, dq * dm):
        raise ValueError(f"state shape {rho.shape} does not match ({dq*dm},)^2")
    t = rho.reshape(dq, dm, dq, dm)
    return np.trace(t, axis1=1, axis2=3)
