"""Quantum-state metrics: fidelity, purity, reduced states, concurrence."""

import numpy as np

__all__ = ["fidelity", "purity", "partial_trace", "concurrence"]

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


def fidelity(rho: np.ndarray, phi: np.ndarray) -> float:
    """Overlap <phi|rho|phi> with a pure target state, clamped to [0, 1]."""
    rho = np.asarray(rho)
    phi = np.asarray(phi)
    if rho.shape != (phi.size, phi.size):
        raise ValueError(
            f"dimension mismatch: rho {rho.shape}, target length {phi.size}"
        )
    f = np.real(np.vdot(phi, rho @ phi))
    if f < -1e-10 or f > 1.0 + 1e-10:
        raise ValueError(f"fidelity {f} outside [0, 1] beyond tolerance")
    return float(min(max(f, 0.0), 1.0))


def purity(rho: np.ndarray) -> float:
    """tr(rho^2); 1 for pure states, 1/dim for the maximally mixed state."""
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))


def partial_trace(rho: np.ndarray, drop: int) -> np.ndarray:
    """Trace out qubit `drop` (0-based) of a multi-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    n = int(round(np.log2(dim)))
    if 2**n != dim or rho.shape != (dim, dim):
        raise ValueError(f"rho of shape {rho.shape} is not a qubit register")
    if not 0 <= drop < n:
        raise ValueError(f"qubit index {drop} out of range for {n} qubits")
    t = rho.reshape([2] * (2 * n))
    # Contract the dropped qubit's row index (axis `drop`) with its column
    # index (axis n + drop); remaining axes keep their relative order.
    t = np.trace(t, axis1=drop, axis2=n + drop)
    return t.reshape(2 ** (n - 1), 2 ** (n - 1))


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of
    the eigenvalues of rho (sy x sy) rho* (sy x sy).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("concurrence requires a 4x4 (two-qubit) density matrix")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    rho_tilde = yy @ rho.conj() @ yy
    ev = np.linalg.eigvals(rho @ rho_tilde)
    # Eigenvalues are non-negative up to roundoff; clip before the root.
    lam = np.sqrt(np.clip(ev.real, 0.0, None))
    lam[::-1].sort()
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))
