"""Density-matrix tomography tables.

For three qubits the ground plus single-excitation block can be
expressed in the orthonormal entangled basis {|+++>, |alpha>, |beta>}
with

    |alpha> = (|gge> - a|geg> - b|egg>)/sqrt(3)
    |beta>  = (|gge> - b|geg> - a|egg>)/sqrt(3)
    a = (1 + sqrt(3))/2,  b = (1 - sqrt(3))/2.

For two qubits the analogous choice is the Bell basis on the
single-excitation block.  Tables are emitted as CSV with labelled rows
and columns and real/imaginary parts of every entry.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .states import basis_labels, bell_state, ket, w_state

__all__ = ["TomographyTable", "tomography_table", "emit_tomography", "entangled_basis"]

ALPHA_COEF = (1.0 + np.sqrt(3.0)) / 2.0
BETA_COEF = (1.0 - np.sqrt(3.0)) / 2.0


@dataclass
class TomographyTable:
    labels: list[str]
    matrix: np.ndarray  # complex, in the labelled basis

    def diagonal_sum(self) -> float:
        return float(np.real(np.trace(self.matrix)))


def entangled_basis(n_qubits: int) -> tuple[list[str], np.ndarray]:
    """Orthonormal basis (labels, column matrix) with the entangled block
    replacing the bare single-excitation states."""
    if n_qubits == 2:
        cols = [ket("gg"), bell_state(+1), bell_state(-1), ket("ee")]
        labels = ["gg", "bell+", "bell-", "ee"]
        return labels, np.column_stack(cols)
    if n_qubits == 3:
        alpha = (ket("gge") - ALPHA_COEF * ket("geg") - BETA_COEF * ket("egg")) / np.sqrt(3.0)
        beta = (ket("gge") - BETA_COEF * ket("geg") - ALPHA_COEF * ket("egg")) / np.sqrt(3.0)
        cols = [
            ket("ggg"),
            w_state(),
            alpha,
            beta,
            ket("gee"),
            ket("ege"),
            ket("eeg"),
            ket("eee"),
        ]
        labels = ["ggg", "+++", "alpha", "beta", "gee", "ege", "eeg", "eee"]
        return labels, np.column_stack(cols)
    raise ValueError("entangled basis defined for 2 or 3 qubits only")


def tomography_table(rho: np.ndarray, basis: str = "bare") -> TomographyTable:
    """Express `rho` in the requested basis ('bare' or 'entangled')."""
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    n = int(round(np.log2(dim)))
    if 2**n != dim or rho.shape != (dim, dim):
        raise ValueError(f"density matrix of shape {rho.shape} is not a qubit register")
    if basis == "bare":
        return TomographyTable(labels=basis_labels(n), matrix=rho.copy())
    if basis == "entangled":
        labels, u = entangled_basis(n)
        return TomographyTable(labels=labels, matrix=u.conj().T @ rho @ u)
    raise ValueError(f"unknown basis {basis!r}")


def emit_tomography(path, rho: np.ndarray, basis: str = "bare", header_lines=()) -> None:
    """Write the tomography CSV: one row per basis state, real and
    imaginary parts of every entry in labelled columns."""
    table = tomography_table(rho, basis)
    if abs(table.diagonal_sum() - 1.0) > 1e-8:
        raise ValueError(
            f"diagonal entries sum to {table.diagonal_sum()!r}, expected 1"
        )
    with open(path, "w", newline="\n") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        cols = ["state"]
        for lab in table.labels:
            cols += [f"re<.|rho|{lab}>", f"im<.|rho|{lab}>"]
        writer.writerow(cols)
        for i, lab in enumerate(table.labels):
            row = [lab]
            for j in range(len(table.labels)):
                row += [
                    repr(float(table.matrix[i, j].real)),
                    repr(float(table.matrix[i, j].imag)),
                ]
            writer.writerow(row)
