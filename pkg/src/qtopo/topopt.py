"""Nested topology-optimisation loop.

Each iteration ranks a single-cell permittivity increment delta_eps for
every non-PML cell by its first-order (Born) effect on the steady-state
fidelity, consolidates every beneficial increment in one sweep, then
re-solves the fields and the steady state to record the iteration.

The per-cell effect composes three linear pieces: the Born change of the
sampled Green's matrix, the fixed vacuum normalisation that turns it
into coupling changes, and the finite-difference fidelity sensitivity.
Cells are scanned in row-major order and there is no randomness, so a
run is a deterministic function of its inputs.
"""

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .couplings import CouplingSet, couplings_from_fields, vacuum_reference
from .fdfd import EmitterLayout, FdfdFactorization, FieldSolution, PermittivityGrid
from .params import MasterEqParams
from .sensitivity import fidelity_sensitivity, steady_fidelity

__all__ = [
    "TOConfig",
    "IterationRecord",
    "DesignTrajectory",
    "born_delta_g",
    "to_step",
    "run_topopt",
    "write_trajectory_csv",
]


@dataclass
class TOConfig:
    """Settings of the design loop.

    `external_params` supplies detunings and drives; its coupling entries
    are ignored (they come from the EM solve).
    """

    target: np.ndarray
    delta: np.ndarray
    omega_drive: np.ndarray
    delta_eps: float = 0.003
    eps_max: float = 9.0
    max_iters: int = 400
    fidelity_goal: float = 0.95
    accept_threshold: float = 0.0

    def validate(self) -> None:
        if not 0.0 < self.delta_eps <= 0.01:
            raise ValueError("delta_eps must lie in (0, 0.01]")
        if not 0.0 < self.fidelity_goal <= 1.0:
            raise ValueError("fidelity_goal must lie in (0, 1]")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")


@dataclass
class IterationRecord:
    k: int
    fidelity: float
    g12_over_gamma: float
    gamma12_over_gamma: float
    purcell: float
    accepted_cells: int


@dataclass
class DesignTrajectory:
    records: list[IterationRecord]
    final_grid: PermittivityGrid
    termination: str
    predicted_df: list[float] = field(default_factory=list)
    actual_df: list[float] = field(default_factory=list)


def born_delta_g(
    fields: list[FieldSolution],
    cell: tuple[int, int],
    delta_eps: float,
    k0: float,
    h: float,
    pml_mask: np.ndarray | None = None,
) -> np.ndarray:
    """First-order change of the sampled Green's matrix for one cell.

    dG(r_i, r_j) = k0^2 * delta_eps * h^2 * E_i(cell) * E_j(cell), where
    E_i is the field of the unit source at emitter i (Lorentz reciprocity
    supplies G(r_i, cell) = E_i(cell)).  Symmetric by construction.
    """
    if pml_mask is not None and not pml_mask[cell]:
        raise ValueError(f"cell {cell} lies inside the PML band")
    e_at_cell = np.array([sol.field[cell] for sol in fields])
    return k0 * k0 * delta_eps * h * h * np.outer(e_at_cell, e_at_cell)


def _coupling_params(
    config: TOConfig, couplings: CouplingSet
) -> MasterEqParams:
    return MasterEqParams(
        delta=config.delta,
        omega_drive=config.omega_drive,
        g=couplings.g,
        gamma=couplings.gamma,
    )


def _record(k: int, f: float, cs: CouplingSet, accepted: int) -> IterationRecord:
    gamma_coll = float(np.exp(np.mean(np.log(np.diag(cs.gamma)))))
    return IterationRecord(
        k=k,
        fidelity=f,
        g12_over_gamma=float(cs.g[0, 1] / gamma_coll),
        gamma12_over_gamma=float(cs.gamma[0, 1] / gamma_coll),
        purcell=cs.purcell,
        accepted_cells=accepted,
    )


def _predicted_df_map(
    fields: list[FieldSolution],
    grid: PermittivityGrid,
    layout: EmitterLayout,
    config: TOConfig,
    couplings: CouplingSet,
    fref: float,
    k0: float,
) -> np.ndarray:
    """Predicted fidelity change per cell for one delta_eps increment.

    Vectorised Born composition over the whole grid; cells inside the PML
    or already at eps_max get -inf so they are never accepted.
    """
    n = layout.n_emitters
    sens = fidelity_sensitivity(_coupling_params(config, couplings), config.target)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    npair = len(pairs)

    scale = k0 * k0 * config.delta_eps * grid.h * grid.h
    df = np.zeros_like(grid.eps)
    for idx, (i, j) in enumerate(pairs):
        prod = fields[i].field * fields[j].field
        # dg_ij = Re dG / (2 fref); dgamma_ij = Im dG / fref
        df += sens[idx] * scale * prod.real / (2.0 * fref)
        df += sens[npair + idx] * scale * prod.imag / fref
    for i in range(n):
        prod = fields[i].field * fields[i].field
        df += sens[2 * npair + i] * scale * prod.imag / fref

    df[~grid.interior_mask()] = -np.inf
    df[grid.eps >= config.eps_max] = -np.inf
    return df


def to_step(
    grid: PermittivityGrid,
    fields: list[FieldSolution],
    layout: EmitterLayout,
    config: TOConfig,
    couplings: CouplingSet,
    fref: float,
):
    """One design sweep.

    Returns ``(new_grid, new_fields, new_couplings, record,
    predicted_df_sum)`` where the record holds the freshly re-solved
    metrics after consolidating every cell whose predicted fidelity gain
    exceeds the acceptance threshold.
    """
    k0 = layout.laser_frequency
    df = _predicted_df_map(fields, grid, layout, config, couplings, fref, k0)
    accept = df > config.accept_threshold
    accepted = int(np.count_nonzero(accept))
    predicted = float(df[accept].sum()) if accepted else 0.0

    new_grid = grid.copy()
    new_grid.eps[accept] = np.minimum(
        new_grid.eps[accept] + config.delta_eps, config.eps_max
    )

    fact = FdfdFactorization(new_grid, k0)
    new_fields = fact.solve_all(layout)
    new_couplings = couplings_from_fields(new_fields, layout, fref)
    f = steady_fidelity(_coupling_params(config, new_couplings), config.target)
    return new_grid, new_fields, new_couplings, _record(0, f, new_couplings, accepted), predicted


def run_topopt(
    config: TOConfig,
    grid: PermittivityGrid,
    layout: EmitterLayout,
    progress=None,
) -> DesignTrajectory:
    """Iterate design sweeps until the fidelity goal, the iteration cap,
    saturation at eps_max, or a stall (3 sweeps accepting no cell).

    The trajectory starts with the k = 0 record of the seed map and keeps
    the per-sweep predicted and realised fidelity changes (first-order
    consistency diagnostics).
    """
    config.validate()
    grid.validate()
    layout.validate(grid)
    if config.eps_max > grid.eps_max:
        raise ValueError("config.eps_max exceeds the grid's eps_max bound")
    k0 = layout.laser_frequency

    fref = vacuum_reference(grid, layout)
    fact = FdfdFactorization(grid, k0)
    fields = fact.solve_all(layout)
    couplings = couplings_from_fields(fields, layout, fref)
    f = steady_fidelity(_coupling_params(config, couplings), config.target)

    records = [_record(0, f, couplings, 0)]
    predicted_df: list[float] = []
    actual_df: list[float] = []
    termination = "max_iters"
    grid = grid.copy()
    stall = 0

    for k in range(1, config.max_iters + 1):
        if records[-1].fidelity >= config.fidelity_goal:
            termination = "goal"
            break
        grid, fields, couplings, rec, predicted = to_step(
            grid, fields, layout, config, couplings, fref
        )
        rec.k = k
        actual_df.append(rec.fidelity - records[-1].fidelity)
        predicted_df.append(predicted)
        records.append(rec)
        if progress is not None:
            progress(rec)
        if rec.accepted_cells == 0:
            stall += 1
            if stall >= 3:
                termination = "stalled"
                break
        else:
            stall = 0
        interior = grid.interior_mask()
        if np.all(grid.eps[interior] >= config.eps_max - 1e-12):
            termination = "eps_max"
            break
    else:
        if records[-1].fidelity >= config.fidelity_goal:
            termination = "goal"

    return DesignTrajectory(
        records=records,
        final_grid=grid,
        termination=termination,
        predicted_df=predicted_df,
        actual_df=actual_df,
    )


def write_trajectory_csv(path, traj: DesignTrajectory, header_lines=()) -> None:
    """Trajectory CSV with columns (k, F, g12_over_gamma,
    gamma12_over_gamma, purcell, accepted_cells)."""
    with open(path, "w", newline="\n") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["k", "F", "g12_over_gamma", "gamma12_over_gamma", "purcell",
             "accepted_cells"]
        )
        for r in traj.records:
            writer.writerow(
                [r.k, repr(r.fidelity), repr(r.g12_over_gamma),
                 repr(r.gamma12_over_gamma), repr(r.purcell), r.accepted_cells]
            )
