"""Vectorised Liouvillian construction.

Conventions (fixed and relied upon by every consumer):

* density matrices are vectorised by column stacking, ``vec(rho)[j*d + i]
  = rho[i, j]``, equivalent to ``rho.reshape(-1, order="F")``;
* under this convention ``vec(A rho B) = kron(B.T, A) vec(rho)``;
* qubit 1 is the most significant tensor factor (see `states`); when a
  bosonic mode is present it is the last factor.

The generator implemented here is

    L rho = i [rho, H] + sum_ij gamma_ij (s_j rho s_i^+
            - 1/2 {s_i^+ s_j, rho})

with ``H = sum_i delta_i n_i + sum_{i != j} g_ij s_i^+ s_j
+ sum_i Omega_i (s_i + s_i^+)`` in the frame rotating at the laser
frequency.
"""

import numpy as np

from .params import MasterEqParams

__all__ = [
    "vec",
    "unvec",
    "lowering_ops",
    "hamiltonian",
    "lindblad_superoperator",
    "build_liouvillian",
]

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of `vec` for a square matrix."""
    v = np.asarray(v)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"vector of length {v.size} is not a square matrix")
    return v.reshape((d, d), order="F")


def _embed(op: np.ndarray, slot: int, dims: list[int]) -> np.ndarray:
    """Tensor `op` into factor `slot` of a product space with factor
    dimensions `dims` (slot 0 most significant)."""
    out = np.eye(1, dtype=complex)
    for k, d in enumerate(dims):
        out = np.kron(out, op if k == slot else np.eye(d, dtype=complex))
    return out


def lowering_ops(n_qubits: int) -> list[np.ndarray]:
    """Per-qubit lowering operators on the full 2^n space."""
    dims = [2] * n_qubits
    return [_embed(SIGMA_MINUS, i, dims) for i in range(n_qubits)]


def hamiltonian(p: MasterEqParams) -> np.ndarray:
    """Laser-frame Hamiltonian of the qubit-only model."""
    sigma = lowering_ops(p.n_qubits)
    dim = 2**p.n_qubits
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(p.n_qubits):
        h += p.delta[i] * (sigma[i].conj().T @ sigma[i])
        h += p.omega_drive[i] * (sigma[i] + sigma[i].conj().T)
        for j in range(p.n_qubits):
            if i != j:
                h += p.g[i, j] * (sigma[i].conj().T @ sigma[j])
    return h


def lindblad_superoperator(
    h: np.ndarray,
    jump_ops: list[np.ndarray],
    rate_matrix: np.ndarray | None = None,
) -> np.ndarray:
    """Column-stacked superoperator for a Lindblad generator.

    Parameters
    ----------
    h : (d, d) array
        Hamiltonian; enters as ``i [rho, H]``.
    jump_ops : list of (d, d) arrays
        Operators ``c_k`` appearing in the dissipator.
    rate_matrix : (K, K) array, optional
        Cross-rate matrix ``r_kl`` weighting ``c_l rho c_k^+`` terms.  When
        omitted the dissipator is the diagonal sum of ``D[c_k]`` with unit
        rates (fold rates into the operators in that case).
    """
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    lv = 1j * (np.kron(h.T, eye) - np.kron(eye, h))
    if rate_matrix is None:
        rate_matrix = np.eye(len(jump_ops))
    rate_matrix = np.asarray(rate_matrix, dtype=float)
    for k, ck in enumerate(jump_ops):
        for l, cl in enumerate(jump_ops):
            r = rate_matrix[k, l]
            if r == 0.0:
                continue
            anti = ck.conj().T @ cl
            lv += r * (
                np.kron(ck.conj(), cl)
                - 0.5 * np.kron(eye, anti)
                - 0.5 * np.kron(anti.T, eye)
            )
    return lv


def build_liouvillian(p: MasterEqParams) -> np.ndarray:
    """Vectorised Liouvillian of the qubit-only master equation.

    Raises
    ------
    ValueError
        If the dissipative matrix is not positive semi-definite (the
        generator would not be a physical Lindbladian).
    """
    p.validate()
    return lindblad_superoperator(
        hamiltonian(p), lowering_ops(p.n_qubits), rate_matrix=p.gamma
    )
