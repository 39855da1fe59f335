"""Constrained optimisation of the three-qubit master equation for the
symmetric W state.

The parameter space is reduced by invariance under exchange of the outer
qubits (1 and 3): six internal quantities (gamma_1 = gamma_3, gamma_2,
gamma_12 = gamma_23, gamma_13, g_12 = g_23, g_13) and four external ones
(delta_1 = delta_3, delta_2, Omega_1 = Omega_3, Omega_2).  Feasibility
requires sign(g_12) = -sign(g_13), sign(gamma_12) = -sign(gamma_13) and
a positive semi-definite expanded dissipative matrix; infeasible points
score 0 (death penalty).
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import steady_state
from .errors import NumericsError
from .liouvillian import build_liouvillian
from .metrics import fidelity
from .params import MasterEqParams, PSD_TOL
from .states import w_state

__all__ = [
    "SymmetricTripleParams",
    "PARAM_NAMES",
    "default_bounds",
    "expand_params",
    "objective_w_fidelity",
    "params_from_vector",
    "vector_from_params",
]

PARAM_NAMES = [
    "gamma1",
    "gamma2",
    "gamma12",
    "gamma13",
    "g12",
    "g13",
    "delta1",
    "delta2",
    "omega1",
    "omega2",
]


@dataclass
class SymmetricTripleParams:
    """The ten free quantities under 1 <-> 3 exchange symmetry."""

    gamma1: float
    gamma2: float
    gamma12: float
    gamma13: float
    g12: float
    g13: float
    delta1: float
    delta2: float
    omega1: float
    omega2: float

    def sign_constraints_ok(self) -> bool:
        return (
            np.sign(self.g12) == -np.sign(self.g13)
            and np.sign(self.gamma12) == -np.sign(self.gamma13)
        )


def expand_params(p: SymmetricTripleParams) -> MasterEqParams:
    """Full three-qubit parameter set with the exchange symmetry applied.

    Raises
    ------
    ValueError
        If a sign constraint is violated or the expanded dissipative
        matrix is not positive semi-definite.
    """
    if not p.sign_constraints_ok():
        raise ValueError(
            "sign constraints violated: need sign(g12) = -sign(g13) and "
            "sign(gamma12) = -sign(gamma13)"
        )
    gamma = np.array(
        [
            [p.gamma1, p.gamma12, p.gamma13],
            [p.gamma12, p.gamma2, p.gamma12],
            [p.gamma13, p.gamma12, p.gamma1],
        ]
    )
    g = np.array(
        [
            [0.0, p.g12, p.g13],
            [p.g12, 0.0, p.g12],
            [p.g13, p.g12, 0.0],
        ]
    )
    full = MasterEqParams(
        delta=np.array([p.delta1, p.delta2, p.delta1]),
        omega_drive=np.array([p.omega1, p.omega2, p.omega1]),
        g=g,
        gamma=gamma,
    )
    full.validate()
    return full


def params_from_vector(x: np.ndarray) -> SymmetricTripleParams:
    return SymmetricTripleParams(*[float(v) for v in x])


def vector_from_params(p: SymmetricTripleParams) -> np.ndarray:
    return np.array([getattr(p, name) for name in PARAM_NAMES])


def default_bounds() -> list[tuple[float, float]]:
    """Search box.

    Decay rates in [0.05, 5]; off-diagonal couplings up to 3 in magnitude
    (the bulk-medium Green's function bounds their spatial variation);
    detunings in [-2, 2].  Omega_1 is gauge-fixed positive (a global
    drive-phase flip leaves every W-state observable unchanged) while
    Omega_2 keeps both signs, as the relative phase is physical.
    """
    return [
        (0.05, 5.0),  # gamma1
        (0.05, 5.0),  # gamma2
        (-3.0, 3.0),  # gamma12
        (-3.0, 3.0),  # gamma13
        (-3.0, 3.0),  # g12
        (-3.0, 3.0),  # g13
        (-2.0, 2.0),  # delta1
        (-2.0, 2.0),  # delta2
        (0.01, 2.0),  # omega1
        (-2.0, 2.0),  # omega2
    ]


def objective_w_fidelity(p: SymmetricTripleParams) -> float:
    """Steady-state fidelity to the symmetric W state; 0 on any
    constraint violation or solver failure."""
    try:
        full = expand_params(p)
    except ValueError:
        return 0.0
    try:
        rho = steady_state(build_liouvillian(full))
    except (NumericsError, ValueError):
        return 0.0
    return fidelity(rho, w_state())


def objective_vector(x: np.ndarray) -> float:
    """Vector-argument adapter used by the swarm optimiser."""
    return objective_w_fidelity(params_from_vector(x))


# ---------------------------------------------------------------------------
# Fast evaluation path.
#
# The Liouvillian is exactly linear in the ten symmetric-triple parameters,
# so it decomposes over a fixed 64x64 basis computed once.  The swarm
# budget runs millions of evaluations; assembling through the generic
# builder would dominate the runtime.
# ---------------------------------------------------------------------------

_BASIS = None
_W_VEC = None
_TRACE_IDX = None


def _build_basis():
    from .liouvillian import lindblad_superoperator, lowering_ops

    sigma = lowering_ops(3)
    zero_h = np.zeros((8, 8), dtype=complex)

    def dissipator(pairs):
        rate = np.zeros((3, 3))
        for i, j in pairs:
            rate[i, j] = 1.0
        return lindblad_superoperator(zero_h, sigma, rate_matrix=rate)

    def ham(h):
        return lindblad_superoperator(h, sigma, rate_matrix=np.zeros((3, 3)))

    num = [s.conj().T @ s for s in sigma]
    hop = lambda i, j: sigma[i].conj().T @ sigma[j] + sigma[j].conj().T @ sigma[i]
    drive = lambda i: sigma[i] + sigma[i].conj().T

    basis = np.stack(
        [
            dissipator([(0, 0), (2, 2)]),                          # gamma1
            dissipator([(1, 1)]),                                   # gamma2
            dissipator([(0, 1), (1, 0), (1, 2), (2, 1)]),           # gamma12
            dissipator([(0, 2), (2, 0)]),                           # gamma13
            ham(hop(0, 1) + hop(1, 2)),                             # g12
            ham(hop(0, 2)),                                         # g13
            ham(num[0] + num[2]),                                   # delta1
            ham(num[1]),                                            # delta2
            ham(drive(0) + drive(2)),                               # omega1
            ham(drive(1)),                                          # omega2
        ]
    )
    return basis


def fast_objective(x: np.ndarray) -> float:
    """Same value as `objective_vector` through the cached linear basis."""
    global _BASIS, _W_VEC, _TRACE_IDX
    if _BASIS is None:
        _BASIS = _build_basis()
        _W_VEC = w_state()
        _TRACE_IDX = np.arange(8) * 9  # diagonal entries of vec(rho)

    gamma1, gamma2, gamma12, gamma13, g12, g13 = x[:6]
    if np.sign(g12) != -np.sign(g13) or np.sign(gamma12) != -np.sign(gamma13):
        return 0.0
    gamma = np.array(
        [
            [gamma1, gamma12, gamma13],
            [gamma12, gamma2, gamma12],
            [gamma13, gamma12, gamma1],
        ]
    )
    if gamma1 <= 0.0 or gamma2 <= 0.0:
        return 0.0
    if np.linalg.eigvalsh(gamma)[0] < -PSD_TOL:
        return 0.0

    lv = np.tensordot(np.asarray(x, dtype=float), _BASIS, axes=1)
    a = lv.copy()
    a[0, :] = 0.0
    a[0, _TRACE_IDX] = 1.0
    b = np.zeros(64, dtype=complex)
    b[0] = 1.0
    try:
        v = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return 0.0
    if not np.all(np.isfinite(v)) or np.linalg.norm(lv @ v) > 1e-9:
        return 0.0
    rho = v.reshape(8, 8, order="F")
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        return 0.0
    f = np.real(_W_VEC.conj() @ (rho @ _W_VEC)) / tr
    if not np.isfinite(f):
        return 0.0
    return float(min(max(f, 0.0), 1.0))
