"""Parameter sets of the driven-dissipative master equation.

All rates, detunings and drive amplitudes are expressed in units of the
free-space decay rate gamma_0 (conversion to physical units lives in the
IO layer only).
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["MasterEqParams", "dark_state_bell_params", "PSD_TOL"]

# Eigenvalues of the dissipative matrix may dip this far below zero and
# still count as positive semi-definite (numerical noise allowance).
PSD_TOL = 1e-10


@dataclass
class MasterEqParams:
    """Detunings, drives and couplings of the qubit-only master equation.

    Attributes
    ----------
    delta : (n,) array
        Qubit-laser detunings delta_i = omega_i - omega_L.
    omega_drive : (n,) array
        Drive amplitudes Omega_i; the sign carries the laser phase.
    g : (n, n) array
        Coherent coupling matrix, symmetric with zero diagonal.
    gamma : (n, n) array
        Dissipative matrix, symmetric positive semi-definite with strictly
        positive diagonal (individual decay rates).
    """

    delta: np.ndarray
    omega_drive: np.ndarray
    g: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        self.delta = np.atleast_1d(np.asarray(self.delta, dtype=float))
        self.omega_drive = np.atleast_1d(np.asarray(self.omega_drive, dtype=float))
        self.g = np.asarray(self.g, dtype=float)
        self.gamma = np.asarray(self.gamma, dtype=float)

    @property
    def n_qubits(self) -> int:
        return self.delta.shape[0]

    def validate(self) -> None:
        """Raise ValueError if any structural invariant is violated."""
        n = self.n_qubits
        if n not in (1, 2, 3):
            raise ValueError(f"supported qubit counts are 1-3, got {n}")
        for name, arr, shape in [
            ("delta", self.delta, (n,)),
            ("omega_drive", self.omega_drive, (n,)),
            ("g", self.g, (n, n)),
            ("gamma", self.gamma, (n, n)),
        ]:
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
        if not np.allclose(self.g, self.g.T, atol=1e-12):
            raise ValueError("g must be symmetric")
        if np.max(np.abs(np.diag(self.g))) > 1e-12:
            raise ValueError("g must have zero diagonal")
        if not np.allclose(self.gamma, self.gamma.T, atol=1e-12):
            raise ValueError("gamma must be symmetric")
        if np.min(np.diag(self.gamma)) <= 0.0:
            raise ValueError("gamma diagonal entries must be > 0")
        w = np.linalg.eigvalsh(0.5 * (self.gamma + self.gamma.T))
        if w.min() < -PSD_TOL:
            raise ValueError(
                f"gamma is not positive semi-definite (min eigenvalue {w.min():.3e}); "
                "the Lindbladian would be unphysical"
            )

    def collective_rate(self) -> float:
        """Geometric mean of the individual decay rates (gamma in the
        Purcell factor gamma/gamma_0)."""
        return float(np.exp(np.mean(np.log(np.diag(self.gamma)))))


def dark_state_bell_params(
    delta: float = 0.2, omega: float = 0.7, gamma: float = 1.0
) -> MasterEqParams:
    """Reference two-qubit parameter set that stabilises the odd Bell state.

    Maximal dissipative coupling (gamma_12 = gamma), no coherent coupling,
    detunings symmetric about the laser and in-phase driving.  The steady
    state is the pure dark state |gg> + (sqrt(2) omega/delta)|+-> up to
    normalisation.
    """
    return MasterEqParams(
        delta=np.array([delta, -delta]),
        omega_drive=np.array([omega, omega]),
        g=np.zeros((2, 2)),
        gamma=np.array([[gamma, gamma], [gamma, gamma]]),
    )
