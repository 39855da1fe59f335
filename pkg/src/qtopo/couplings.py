"""Master-equation couplings from sampled Green's functions.

The qubit-only model consumes rates in units of the free-space decay.
On the discrete grid this normalisation is the imaginary part of the
vacuum self-field, computed once on the same grid and stencil, so the
discretisation error cancels in every ratio:

    gamma_ij / gamma_0 = Im G(r_i, r_j) / fref
    g_ij     / gamma_0 = Re G(r_i, r_j) / (2 fref)      (i != j)

with fref = Im G_vac(r, r).  The coherent coupling is never needed at
coincident points (the detunings are external), which avoids the
log-singular real part.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .fdfd import EmitterLayout, FdfdFactorization, FieldSolution, PermittivityGrid

__all__ = [
    "CouplingSet",
    "psd_project",
    "vacuum_reference",
    "couplings_from_fields",
]

# Fraction of ||gamma|| beyond which a PSD projection indicates a grid
# too coarse for trustworthy couplings.
PROJECTION_WARN_FRACTION = 0.05


@dataclass
class CouplingSet:
    """Dimensionless couplings extracted from one set of field solves."""

    g: np.ndarray
    gamma: np.ndarray
    purcell: float
    projection_shift: float = 0.0


def psd_project(gamma: np.ndarray) -> np.ndarray:
    """Clamp negative eigenvalues of a symmetric matrix to zero.

    Returns the input unchanged when it is already PSD within 1e-10.
    Warns when the projection moves the matrix by more than 5% of its
    norm (numerical-quality flag).
    """
    gamma = np.asarray(gamma, dtype=float)
    sym = 0.5 * (gamma + gamma.T)
    w, v = np.linalg.eigh(sym)
    if w.min() >= -1e-10:
        return sym
    projected = (v * np.clip(w, 0.0, None)) @ v.T
    projected = 0.5 * (projected + projected.T)
    shift = np.linalg.norm(projected - sym)
    if shift > PROJECTION_WARN_FRACTION * np.linalg.norm(sym):
        warnings.warn(
            f"PSD projection moved gamma by {shift:.3e} "
            f"(> {PROJECTION_WARN_FRACTION:.0%} of its norm); "
            "couplings may be under-resolved",
            stacklevel=2,
        )
    return projected


def vacuum_reference(grid: PermittivityGrid, layout: EmitterLayout) -> float:
    """Im G_vac(r, r) at the first emitter on an all-vacuum copy of `grid`."""
    vac = grid.copy()
    vac.eps = np.ones_like(vac.eps)
    fact = FdfdFactorization(vac, layout.laser_frequency)
    cell = layout.positions[0]
    sol = fact.solve_point(cell)
    return float(sol.field[cell].imag)


def couplings_from_fields(
    fields: list[FieldSolution],
    layout: EmitterLayout,
    freespace_ref: float,
) -> CouplingSet:
    """Dimensionless coupling matrices from one field solve per emitter.

    The sampled Green's matrix is symmetrised (reciprocity holds to
    solver precision) and the dissipative part is PSD-projected.
    """
    if freespace_ref <= 0.0:
        raise ValueError(
            f"vacuum reference rate {freespace_ref:g} <= 0: bad grid"
        )
    n = layout.n_emitters
    if len(fields) != n:
        raise ValueError(f"expected {n} field solutions, got {len(fields)}")
    g_sample = np.zeros((n, n), dtype=complex)
    for j, sol in enumerate(fields):
        for i, cell in enumerate(layout.positions):
            g_sample[i, j] = sol.field[cell]
    g_sample = 0.5 * (g_sample + g_sample.T)

    gamma = g_sample.imag / freespace_ref
    raw = 0.5 * (gamma + gamma.T)
    gamma = psd_project(raw)
    shift = float(np.linalg.norm(gamma - raw))

    g = g_sample.real / (2.0 * freespace_ref)
    np.fill_diagonal(g, 0.0)

    diag = np.diag(gamma)
    if np.any(diag <= 0.0):
        raise ValueError("non-positive self-rate after projection: bad grid")
    purcell = float(np.exp(np.mean(np.log(diag))))
    return CouplingSet(g=g, gamma=gamma, purcell=purcell, projection_shift=shift)
