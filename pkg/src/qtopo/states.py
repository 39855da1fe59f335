"""Target pure states and computational-basis helpers.

Basis convention (fixed package-wide): qubit 1 is the most significant
tensor factor.  A basis label such as ``"ge"`` means qubit 1 in ``g`` and
qubit 2 in ``e``; its index is the binary number with ``g = 0`` and
``e = 1``, so the two-qubit ordering is ``|gg>, |ge>, |eg>, |ee>``.
"""

import numpy as np

__all__ = ["basis_labels", "basis_index", "ket", "bell_state", "w_state"]


def basis_labels(n_qubits: int) -> list[str]:
    """All computational-basis labels for `n_qubits`, in index order."""
    return [
        "".join("ge"[(k >> (n_qubits - 1 - i)) & 1] for i in range(n_qubits))
        for k in range(2**n_qubits)
    ]


def basis_index(label: str) -> int:
    """Index of a product-state label, e.g. ``"ge" -> 1``."""
    idx = 0
    for ch in label:
        if ch not in "ge":
            raise ValueError(f"invalid basis label {label!r}")
        idx = 2 * idx + (1 if ch == "e" else 0)
    return idx


def ket(label: str) -> np.ndarray:
    """Computational-basis ket for a product-state label."""
    v = np.zeros(2 ** len(label), dtype=complex)
    v[basis_index(label)] = 1.0
    return v


def bell_state(parity: int) -> np.ndarray:
    """Two-qubit Bell state ``(|ge> + parity |eg>)/sqrt(2)``.

    Parameters
    ----------
    parity : int
        +1 for the even (symmetric) state, -1 for the odd (antisymmetric)
        state.
    """
    if parity not in (+1, -1):
        raise ValueError("parity must be +1 or -1")
    return (ket("ge") + parity * ket("eg")) / np.sqrt(2.0)


def w_state() -> np.ndarray:
    """Symmetric three-qubit single-excitation state
    ``(|gge> + |geg> + |egg>)/sqrt(3)``."""
    return (ket("gge") + ket("geg") + ket("egg")) / np.sqrt(3.0)
