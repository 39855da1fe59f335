"""Finite-difference sensitivity of the steady-state fidelity with
respect to the master-equation couplings.

The design loop needs dF/dtheta over theta in {g_ij (i<j), gamma_ij
(i<j), gamma_ii}; detunings and drives are external and fixed.  Central
differences with a 1e-6 step on the steady-state solve are accurate to
~1e-8 and cost nothing next to an EM solve.  Perturbed dissipative
matrices that leave the PSD cone (the optimum sits on its boundary) are
projected back before solving.
"""

from dataclasses import replace

import numpy as np

from .couplings import psd_project
from .dynamics import steady_state
from .liouvillian import build_liouvillian
from .metrics import fidelity
from .params import MasterEqParams

__all__ = ["coupling_names", "fidelity_sensitivity", "steady_fidelity"]

FD_STEP = 1e-6


def coupling_names(n_qubits: int) -> list[str]:
    """Order of sensitivity entries: g_ij (i<j), gamma_ij (i<j), gamma_ii."""
    names = [f"g{i+1}{j+1}" for i in range(n_qubits) for j in range(i + 1, n_qubits)]
    names += [
        f"gamma{i+1}{j+1}" for i in range(n_qubits) for j in range(i + 1, n_qubits)
    ]
    names += [f"gamma{i+1}{i+1}" for i in range(n_qubits)]
    return names


def _perturbed(p: MasterEqParams, which: str, i: int, j: int, step: float):
    g = p.g.copy()
    gamma = p.gamma.copy()
    if which == "g":
        g[i, j] += step
        g[j, i] += step
    else:
        gamma[i, j] += step
        if i != j:
            gamma[j, i] += step
        gamma = psd_project(gamma)
        if np.any(np.diag(gamma) <= 0.0):
            # Keep the diagonal strictly positive after projection.
            gamma = gamma + 1e-15 * np.eye(p.n_qubits)
    return replace(p, g=g, gamma=gamma)


def steady_fidelity(p: MasterEqParams, target: np.ndarray) -> float:
    """Fidelity of the steady state of `p` to the pure target."""
    return fidelity(steady_state(build_liouvillian(p)), target)


def fidelity_sensitivity(
    p: MasterEqParams,
    target: np.ndarray,
    step: float = FD_STEP,
    order: int = 3,
) -> np.ndarray:
    """dF/dtheta by central finite differences (3- or 5-point stencil).

    Entries follow `coupling_names(p.n_qubits)`.
    """
    if order not in (3, 5):
        raise ValueError("order must be 3 or 5")
    n = p.n_qubits
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    thetas = [("g", i, j) for i, j in pairs]
    thetas += [("gamma", i, j) for i, j in pairs]
    thetas += [("gamma", i, i) for i in range(n)]

    out = np.zeros(len(thetas))
    for k, (which, i, j) in enumerate(thetas):
        f = lambda s: steady_fidelity(_perturbed(p, which, i, j, s), target)
        if order == 3:
            out[k] = (f(step) - f(-step)) / (2.0 * step)
        else:
            out[k] = (
                -f(2 * step) + 8 * f(step) - 8 * f(-step) + f(-2 * step)
            ) / (12.0 * step)
    return out
