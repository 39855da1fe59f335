"""Run configuration: a line-oriented ``key = value`` format with
``[section]`` headers.

The parser is strict: unknown sections or keys, malformed lines and
out-of-range values are reported with their line number.  Every physical
quantity is dimensionless (rates in gamma_0 units, lengths in design
wavelengths).  `render_config` writes the effective configuration back
out so that a run's inputs can be echoed next to its outputs; parsing
the echo reproduces the RunConfig exactly.
"""

from dataclasses import dataclass, field, fields as dc_fields

import numpy as np

from .errors import ConfigError

__all__ = ["RunConfig", "parse_config", "parse_config_text", "render_config", "MODES"]

MODES = (
    "steady",
    "dynamics",
    "gap",
    "green-validate",
    "pso",
    "topopt",
    "tomography",
)

EPS_MAX_THRESHOLD = 9.0


@dataclass
class GridSection:
    size_x: float = 8.0
    size_z: float = 12.0
    resolution: int = 40  # cells per wavelength
    pml_cells: int = 12
    pml_strength: float = 10.0
    eps_max: float = 9.0
    allow_eps_above_threshold: bool = False
    map_file: str = ""  # optional initial permittivity map


@dataclass
class LayoutSection:
    separations: list[float] = field(default_factory=lambda: [1.0])


@dataclass
class ParamsSection:
    n_qubits: int = 2
    delta: list[float] = field(default_factory=lambda: [0.2, -0.2])
    omega: list[float] = field(default_factory=lambda: [0.7, 0.7])
    gamma_diag: list[float] = field(default_factory=lambda: [1.0, 1.0])
    gamma12: float = 0.0
    gamma13: float = 0.0
    gamma23: float = 0.0
    g12: float = 0.0
    g13: float = 0.0
    g23: float = 0.0


@dataclass
class TargetSection:
    kind: str = "bell"  # bell | w
    parity: int = -1    # bell only


@dataclass
class TopoptSection:
    delta_eps: float = 0.003
    max_iters: int = 400
    fidelity_goal: float = 0.95
    accept_threshold: float = 0.0


@dataclass
class PsoSection:
    particles: int = 200
    iters: int = 500
    restarts: int = 20
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445
    bounds_scale: float = 1.0


@dataclass
class DynamicsSection:
    t_min: float = 0.1
    t_max: float = 1e4
    n_times: int = 200
    single_mode: bool = False
    coupling_g: float = 7.75
    gamma_a: float = 2459.0
    mode_detuning: float = 0.0
    n_max: int = 3
    free_space_rate: float = 1.0


@dataclass
class TomographySection:
    basis: str = "bare"  # bare | entangled


@dataclass
class UnitsSection:
    emit_physical: bool = False
    dipole_e_nm: float = 1.0
    lambda_nm: float = 600.0


@dataclass
class RunConfig:
    mode: str = "steady"
    seed: int = 0
    out_dir: str = "out"
    grid: GridSection = field(default_factory=GridSection)
    layout: LayoutSection = field(default_factory=LayoutSection)
    params: ParamsSection = field(default_factory=ParamsSection)
    target: TargetSection = field(default_factory=TargetSection)
    topopt: TopoptSection = field(default_factory=TopoptSection)
    pso: PsoSection = field(default_factory=PsoSection)
    dynamics: DynamicsSection = field(default_factory=DynamicsSection)
    tomography: TomographySection = field(default_factory=TomographySection)
    units: UnitsSection = field(default_factory=UnitsSection)


_SECTIONS = {
    "run": None,  # handled inline
    "grid": GridSection,
    "layout": LayoutSection,
    "params": ParamsSection,
    "target": TargetSection,
    "topopt": TopoptSection,
    "pso": PsoSection,
    "dynamics": DynamicsSection,
    "tomography": TomographySection,
    "units": UnitsSection,
}

# Sections that must be present (beyond [run]) for each mode.
REQUIRED_SECTIONS = {
    "steady": ["params", "target"],
    "dynamics": ["params"],
    "gap": ["params"],
    "green-validate": ["grid"],
    "pso": ["pso"],
    "topopt": ["grid", "layout", "params", "target", "topopt"],
    "tomography": ["params", "tomography"],
}


def _parse_bool(raw: str, lineno: int) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"line {lineno}: expected a boolean, got {raw!r}")


def _convert(value: str, target, lineno: int):
    if isinstance(target, bool):
        return _parse_bool(value, lineno)
    if isinstance(target, int):
        try:
            return int(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: expected an integer, got {value!r}") from exc
    if isinstance(target, float):
        try:
            return float(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: expected a number, got {value!r}") from exc
    if isinstance(target, list):
        try:
            return [float(v) for v in value.split()]
        except ValueError as exc:
            raise ConfigError(
                f"line {lineno}: expected space-separated numbers, got {value!r}"
            ) from exc
    return value.strip()


def parse_config_text(text: str) -> RunConfig:
    """Parse configuration text into a validated RunConfig."""
    cfg = RunConfig()
    section = None
    seen_sections: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header {line!r}")
            name = line[1:-1].strip().lower()
            if name not in _SECTIONS:
                raise ConfigError(
                    f"line {lineno}: unknown section [{name}]; "
                    f"known sections: {', '.join(sorted(_SECTIONS))}"
                )
            section = name
            seen_sections.add(name)
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if section is None:
            raise ConfigError(f"line {lineno}: key outside any [section]")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()

        if section == "run":
            if key == "mode":
                if value not in MODES:
                    raise ConfigError(
                        f"line {lineno}: unknown mode {value!r}; "
                        f"choose from {', '.join(MODES)}"
                    )
                cfg.mode = value
            elif key == "seed":
                cfg.seed = _convert(value, 0, lineno)
            elif key == "out_dir":
                cfg.out_dir = value
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r} in [run]")
            continue

        target_obj = getattr(cfg, section.replace("-", "_"))
        names = {f.name: f for f in dc_fields(target_obj)}
        if key not in names:
            raise ConfigError(
                f"line {lineno}: unknown key {key!r} in [{section}]; "
                f"known keys: {', '.join(sorted(names))}"
            )
        current = getattr(target_obj, key)
        setattr(target_obj, key, _convert(value, current, lineno))

    if not seen_sections:
        required = ["run"] + REQUIRED_SECTIONS.get(cfg.mode, [])
        raise ConfigError(
            "empty configuration; required sections: "
            + ", ".join(f"[{s}]" for s in required)
        )

    missing = [
        s for s in REQUIRED_SECTIONS.get(cfg.mode, []) if s not in seen_sections
    ]
    if missing:
        raise ConfigError(
            f"mode '{cfg.mode}' requires sections: "
            + ", ".join(f"[{s}]" for s in missing)
        )
    _validate(cfg)
    return cfg


def parse_config(path) -> RunConfig:
    with open(path, "r") as fh:
        return parse_config_text(fh.read())


def _validate(cfg: RunConfig) -> None:
    g = cfg.grid
    if g.eps_max > EPS_MAX_THRESHOLD and not g.allow_eps_above_threshold:
        raise ConfigError(
            f"eps_max = {g.eps_max:g} exceeds the threshold "
            f"{EPS_MAX_THRESHOLD:g}; set allow_eps_above_threshold = true "
            "to override"
        )
    if g.resolution <= 0 or g.size_x <= 0 or g.size_z <= 0:
        raise ConfigError("grid sizes and resolution must be positive")
    if g.pml_cells < 8:
        raise ConfigError("pml_cells must be >= 8")

    p = cfg.params
    n = p.n_qubits
    if n not in (1, 2, 3):
        raise ConfigError(f"n_qubits must be 1, 2 or 3, got {n}")
    for name in ("delta", "omega", "gamma_diag"):
        vals = getattr(p, name)
        if len(vals) != n:
            raise ConfigError(
                f"[params] {name} needs {n} entries, got {len(vals)}"
            )

    t = cfg.target
    if t.kind not in ("bell", "w"):
        raise ConfigError(f"target kind must be 'bell' or 'w', got {t.kind!r}")
    if t.kind == "bell" and t.parity not in (+1, -1):
        raise ConfigError("bell parity must be +1 or -1")

    to = cfg.topopt
    if not 0.0 < to.delta_eps <= 0.01:
        raise ConfigError("topopt delta_eps must lie in (0, 0.01]")
    if not 0.0 < to.fidelity_goal <= 1.0:
        raise ConfigError("topopt fidelity_goal must lie in (0, 1]")

    ps = cfg.pso
    if min(ps.particles, ps.iters, ps.restarts) <= 0:
        raise ConfigError("pso counts must be positive")

    d = cfg.dynamics
    if d.t_min <= 0 or d.t_max <= d.t_min or d.n_times < 2:
        raise ConfigError("dynamics time grid must satisfy 0 < t_min < t_max, n >= 2")

    if cfg.tomography.basis not in ("bare", "entangled"):
        raise ConfigError("tomography basis must be 'bare' or 'entangled'")


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return " ".join(repr(float(x)) for x in v)
    return str(v)


def render_config(cfg: RunConfig) -> str:
    """Serialise a RunConfig; `parse_config_text(render_config(c)) == c`."""
    out = ["[run]"]
    out.append(f"mode = {cfg.mode}")
    out.append(f"seed = {cfg.seed}")
    out.append(f"out_dir = {cfg.out_dir}")
    for section in (
        "grid",
        "layout",
        "params",
        "target",
        "topopt",
        "pso",
        "dynamics",
        "tomography",
        "units",
    ):
        obj = getattr(cfg, section)
        out.append(f"[{section}]")
        for f in dc_fields(obj):
            out.append(f"{f.name} = {_format_value(getattr(obj, f.name))}")
    return "\n".join(out) + "\n"


def master_eq_params(cfg: RunConfig):
    """MasterEqParams from the [params] section."""
    from .params import MasterEqParams

    p = cfg.params
    n = p.n_qubits
    gamma = np.diag(np.asarray(p.gamma_diag, dtype=float))
    g = np.zeros((n, n))
    pairs = {(0, 1): (p.gamma12, p.g12), (0, 2): (p.gamma13, p.g13),
             (1, 2): (p.gamma23, p.g23)}
    for (i, j), (gam, gg) in pairs.items():
        if i < n and j < n:
            gamma[i, j] = gamma[j, i] = gam
            g[i, j] = g[j, i] = gg
    return MasterEqParams(
        delta=np.asarray(p.delta, dtype=float),
        omega_drive=np.asarray(p.omega, dtype=float),
        g=g,
        gamma=gamma,
    )


def target_state(cfg: RunConfig):
    from .states import bell_state, w_state

    if cfg.target.kind == "bell":
        return bell_state(cfg.target.parity)
    return w_state()
