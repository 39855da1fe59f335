"""Mode dispatch and artifact emission.

Every artifact is a CSV (or permittivity-map file) whose first line is a
provenance header carrying the tool version, a hash of the effective
configuration and the seed.  Output is deterministic for a given
configuration and seed: no timestamps, full double precision, fixed row
order.  On failure all partially written artifacts are removed and the
error is re-raised for the CLI to map onto an exit code.
"""

import csv
import hashlib
import os

import numpy as np

from . import __version__
from .cavity import (
    SingleModeParams,
    build_single_mode_liouvillian,
    mode_number_operator,
    trace_out_mode,
)
from .config import (
    RunConfig,
    master_eq_params,
    render_config,
    target_state,
)
from .couplings import couplings_from_fields, vacuum_reference
from .dynamics import evolve, liouvillian_gap, steady_state
from .errors import ConfigError
from .fdfd import (
    FdfdFactorization,
    K0_DEFAULT,
    centered_layout,
    default_grid,
    read_map,
    write_map,
)
from .greens import freespace_green_2d
from .liouvillian import build_liouvillian
from .metrics import concurrence, fidelity, partial_trace, purity
from .pso import PsoConfig, pso_optimize
from .states import bell_state, ket
from .tomography import emit_tomography
from .topopt import TOConfig, run_topopt, write_trajectory_csv
from .wopt import (
    default_bounds,
    expand_params,
    fast_objective,
    params_from_vector,
)

__all__ = ["run", "physical_gamma0_microev"]


def physical_gamma0_microev(dipole_e_nm: float, lambda_nm: float) -> float:
    """Free-space decay rate in micro-eV for a dipole |p| (e nm) at
    wavelength lambda (nm): gamma_0 = omega^3 |p|^2 / (3 pi hbar eps0 c^3).

    Evaluated via hbar*c = 197.327 eV nm and e^2/(4 pi eps0) =
    1.43996 eV nm to stay unit-safe.
    """
    hbar_c = 197.3269804  # eV nm
    coulomb = 1.4399645    # e^2/(4 pi eps0), eV nm
    hbar_omega = 2.0 * np.pi * hbar_c / lambda_nm  # eV
    gamma0_ev = (
        hbar_omega**3 * dipole_e_nm**2 * (4.0 * np.pi * coulomb)
        / (3.0 * np.pi * hbar_c**3)
    )
    return gamma0_ev * 1e6


class _ArtifactWriter:
    """Tracks created files so a failed run leaves no partial artifacts."""

    def __init__(self, cfg: RunConfig, out_dir: str):
        self.out_dir = out_dir
        self.created: list[str] = []
        effective = render_config(cfg)
        digest = hashlib.sha256(effective.encode()).hexdigest()[:16]
        self.header = (
            f"# qtopo {__version__} config_sha256={digest} seed={cfg.seed}"
        )
        self.effective_text = effective

    def path(self, name: str) -> str:
        os.makedirs(self.out_dir, exist_ok=True)
        p = os.path.join(self.out_dir, name)
        self.created.append(p)
        return p

    def write_csv(self, name: str, columns: list[str], rows) -> str:
        p = self.path(name)
        with open(p, "w", newline="\n") as fh:
            fh.write(self.header + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow(
                    [repr(float(v)) if isinstance(v, float) else v for v in row]
                )
        return p

    def echo_config(self) -> None:
        p = self.path("effective_config.cfg")
        with open(p, "w", newline="\n") as fh:
            fh.write(self.header + "\n")
            fh.write(self.effective_text)

    def cleanup(self) -> None:
        for p in self.created:
            if os.path.exists(p):
                os.remove(p)


def _grid_from_config(cfg: RunConfig):
    g = cfg.grid
    h = 1.0 / g.resolution
    if g.map_file:
        grid = read_map(g.map_file, eps_max=g.eps_max, pml_strength=g.pml_strength)
    else:
        grid = default_grid(
            size_x=g.size_x,
            size_z=g.size_z,
            h=h,
            pml_cells=g.pml_cells,
            pml_strength=g.pml_strength,
            eps_max=g.eps_max,
        )
    grid.validate()
    return grid


def _bell_populations(rho):
    return (
        float(np.real(rho[0, 0])),
        fidelity(rho, bell_state(+1)),
        fidelity(rho, bell_state(-1)),
        float(np.real(rho[3, 3])),
    )


def _run_steady(cfg, art):
    p = master_eq_params(cfg)
    target = target_state(cfg)
    rho = steady_state(build_liouvillian(p))
    rows = [
        ("fidelity", fidelity(rho, target)),
        ("purity", purity(rho)),
        ("ground_population", float(np.real(rho[0, 0]))),
    ]
    if p.n_qubits == 2:
        rows.append(("concurrence", concurrence(rho)))
    elif p.n_qubits == 3:
        for k in range(3):
            rows.append(
                (f"concurrence_drop_qubit{k+1}", concurrence(partial_trace(rho, k)))
            )
    art.write_csv("steady_metrics.csv", ["metric", "value"], rows)


def _run_dynamics(cfg, art):
    d = cfg.dynamics
    times = np.logspace(np.log10(d.t_min), np.log10(d.t_max), d.n_times)
    p = master_eq_params(cfg)
    if p.n_qubits != 2:
        raise ConfigError("dynamics mode currently tracks a qubit pair")
    rho0_q = np.outer(ket("gg"), ket("gg").conj())
    if d.single_mode:
        smp = SingleModeParams(
            omega_a_minus_laser=d.mode_detuning,
            Gamma_a=d.gamma_a,
            G_couplings=[d.coupling_g, d.coupling_g],
            gamma0=d.free_space_rate,
            n_max=d.n_max,
        )
        lv = build_single_mode_liouvillian(smp, p.delta, p.omega_drive)
        mode_vac = np.zeros((d.n_max + 1, d.n_max + 1))
        mode_vac[0, 0] = 1.0
        states = evolve(lv, np.kron(rho0_q, mode_vac), times)
        n_op = mode_number_operator(smp)
        rows = []
        for t, rho in zip(times, states):
            rq = trace_out_mode(rho, smp)
            n_g, n_pp, n_pm, n_ee = _bell_populations(rq)
            rows.append(
                (float(t), n_pp, n_pm, n_g, float(np.real(np.trace(n_op @ rho))))
            )
        art.write_csv("dynamics.csv", ["t", "n_pp", "n_pm", "n_G", "n_a"], rows)
    else:
        lv = build_liouvillian(p)
        states = evolve(lv, rho0_q, times)
        rows = []
        for t, rho in zip(times, states):
            n_g, n_pp, n_pm, n_ee = _bell_populations(rho)
            rows.append((float(t), n_pp, n_pm, n_g))
        art.write_csv("dynamics.csv", ["t", "n_pp", "n_pm", "n_G"], rows)


def _run_gap(cfg, art):
    lv = build_liouvillian(master_eq_params(cfg))
    gap, tau = liouvillian_gap(lv)
    art.write_csv("gap.csv", ["metric", "value"], [("gap", gap), ("tau", tau)])


def _run_green_validate(cfg, art):
    grid = _grid_from_config(cfg)
    fact = FdfdFactorization(grid, K0_DEFAULT)
    src = (grid.nx // 2, grid.nz // 2)
    sol = fact.solve_point(src)
    rows = []
    worst = 0.0
    margin = grid.pml_cells + 2
    for ang_deg in (0, 30, 45, 60, 90):
        a = np.radians(ang_deg)
        for rho_target in np.arange(0.5, 3.0 + 1e-9, 0.25):
            di = int(round(rho_target * np.cos(a) / grid.h))
            dj = int(round(rho_target * np.sin(a) / grid.h))
            cell = (src[0] + di, src[1] + dj)
            if not (
                margin <= cell[0] < grid.nx - margin
                and margin <= cell[1] < grid.nz - margin
            ):
                continue
            rho_exact = float(np.hypot(di, dj) * grid.h)
            g_num = complex(sol.field[cell])
            g_ref = freespace_green_2d(K0_DEFAULT, rho_exact)
            rel = abs(g_num - g_ref) / abs(g_ref)
            worst = max(worst, rel)
            rows.append(
                (
                    rho_exact,
                    float(ang_deg),
                    g_num.real,
                    g_num.imag,
                    g_ref.real,
                    g_ref.imag,
                    rel,
                )
            )
    rows.append((0.0, 0.0, 0.0, 0.0, 0.0, 0.0, worst))
    passed = worst <= 0.02
    art.write_csv(
        "green_validate.csv",
        ["rho", "angle_deg", "re_num", "im_num", "re_exact", "im_exact", "rel_error"],
        rows,
    )
    art.write_csv(
        "green_validate_summary.csv",
        ["max_rel_error", "tolerance", "status"],
        [(worst, 0.02, "pass" if passed else "fail")],
    )
    if not passed:
        raise ValueError(f"green-validate failed: max error {worst:.4f} > 0.02")


def _run_pso(cfg, art):
    ps = cfg.pso
    bounds = [
        (lo * ps.bounds_scale, hi * ps.bounds_scale) for lo, hi in default_bounds()
    ]
    pconf = PsoConfig(
        n_particles=ps.particles,
        n_iters=ps.iters,
        n_restarts=ps.restarts,
        inertia=ps.inertia,
        cognitive=ps.cognitive,
        social=ps.social,
        seed=cfg.seed,
        bounds=bounds,
    )
    result = pso_optimize(fast_objective, pconf)
    best = params_from_vector(result.best_params)
    full = expand_params(best)
    rho = steady_state(build_liouvillian(full))
    from .states import w_state

    rows = [("fidelity", result.best_value), ("purity", purity(rho))]
    from .wopt import PARAM_NAMES

    rows += list(zip(PARAM_NAMES, [float(v) for v in result.best_params]))
    art.write_csv("pso_best.csv", ["quantity", "value"], rows)

    hist_rows = []
    for r in range(result.history.shape[0]):
        for it in range(result.history.shape[1]):
            hist_rows.append((r, it, float(result.history[r, it])))
    art.write_csv("pso_history.csv", ["restart", "iteration", "best_value"], hist_rows)

    # Parameters in config format, reusable as [params] for other modes.
    p = art.path("pso_params.cfg")
    with open(p, "w", newline="\n") as fh:
        fh.write(art.header + "\n")
        fh.write("[params]\n")
        fh.write("n_qubits = 3\n")
        fh.write(
            f"delta = {best.delta1!r} {best.delta2!r} {best.delta1!r}\n"
        )
        fh.write(
            f"omega = {best.omega1!r} {best.omega2!r} {best.omega1!r}\n"
        )
        fh.write(
            f"gamma_diag = {best.gamma1!r} {best.gamma2!r} {best.gamma1!r}\n"
        )
        fh.write(f"gamma12 = {best.gamma12!r}\n")
        fh.write(f"gamma13 = {best.gamma13!r}\n")
        fh.write(f"gamma23 = {best.gamma12!r}\n")
        fh.write(f"g12 = {best.g12!r}\n")
        fh.write(f"g13 = {best.g13!r}\n")
        fh.write(f"g23 = {best.g12!r}\n")


def _run_topopt(cfg, art):
    grid = _grid_from_config(cfg)
    layout = centered_layout(grid, cfg.layout.separations, K0_DEFAULT)
    p = master_eq_params(cfg)
    t = cfg.topopt
    tconf = TOConfig(
        target=target_state(cfg),
        delta=p.delta,
        omega_drive=p.omega_drive,
        delta_eps=t.delta_eps,
        eps_max=cfg.grid.eps_max,
        max_iters=t.max_iters,
        fidelity_goal=t.fidelity_goal,
        accept_threshold=t.accept_threshold,
    )
    traj = run_topopt(tconf, grid, layout)
    write_trajectory_csv(
        art.path("trajectory.csv"), traj, header_lines=[art.header]
    )
    write_map(art.path("final_map.csv"), traj.final_grid)
    agree = sum(
        1
        for pr, ac in zip(traj.predicted_df, traj.actual_df)
        if np.sign(pr) == np.sign(ac)
    )
    total = len(traj.predicted_df)
    art.write_csv(
        "topopt_summary.csv",
        ["final_F", "gamma12_over_gamma", "g12_over_gamma", "purcell",
         "iterations", "termination", "sign_agreement"],
        [
            (
                traj.records[-1].fidelity,
                traj.records[-1].gamma12_over_gamma,
                traj.records[-1].g12_over_gamma,
                traj.records[-1].purcell,
                traj.records[-1].k,
                traj.termination,
                (agree / total) if total else 1.0,
            )
        ],
    )


def _run_tomography(cfg, art):
    rho = steady_state(build_liouvillian(master_eq_params(cfg)))
    emit_tomography(
        art.path("tomography.csv"),
        rho,
        basis=cfg.tomography.basis,
        header_lines=[art.header],
    )


_MODE_RUNNERS = {
    "steady": _run_steady,
    "dynamics": _run_dynamics,
    "gap": _run_gap,
    "green-validate": _run_green_validate,
    "pso": _run_pso,
    "topopt": _run_topopt,
    "tomography": _run_tomography,
}


def run(cfg: RunConfig, out_dir: str | None = None) -> str:
    """Execute the configured mode; returns the output directory.

    Removes partial artifacts and re-raises on any failure.
    """
    if cfg.mode not in _MODE_RUNNERS:
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    out = out_dir or cfg.out_dir
    art = _ArtifactWriter(cfg, out)
    try:
        art.echo_config()
        _MODE_RUNNERS[cfg.mode](cfg, art)
        if cfg.units.emit_physical:
            gamma0 = physical_gamma0_microev(
                cfg.units.dipole_e_nm, cfg.units.lambda_nm
            )
            art.write_csv(
                "physical_units.csv",
                ["quantity", "value"],
                [
                    ("gamma0_microev", gamma0),
                    ("dipole_e_nm", cfg.units.dipole_e_nm),
                    ("lambda_nm", cfg.units.lambda_nm),
                ],
            )
    except BaseException:
        art.cleanup()
        raise
    return out
