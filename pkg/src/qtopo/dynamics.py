"""Steady states, transients and spectral gaps of vectorised Liouvillians.

Sizes here are small (Hilbert dimension <= ~32, superoperators <= ~1024
square), so every routine works on dense matrices and favours robustness
over speed.
"""

import numpy as np
import scipy.linalg

from .errors import DegenerateSteadyState, NumericsError
from .liouvillian import unvec, vec

__all__ = ["steady_state", "evolve", "liouvillian_gap"]

# Eigenvalues with real part above -GAP_TOL_ZERO count as "zero" when
# locating the spectral gap.
GAP_TOL_ZERO = 1e-9

RESIDUAL_TOL = 1e-9


def _hilbert_dim(lv: np.ndarray) -> int:
    d2 = lv.shape[0]
    d = int(round(np.sqrt(d2)))
    if lv.ndim != 2 or lv.shape != (d2, d2) or d * d != d2:
        raise ValueError(f"superoperator shape {lv.shape} is not (d^2, d^2)")
    return d


def _null_space_dimension(lv: np.ndarray, tol: float) -> int:
    s = scipy.linalg.svdvals(lv)
    scale = s[0] if s[0] > 0 else 1.0
    return int(np.sum(s / scale < tol))


def steady_state(lv: np.ndarray) -> np.ndarray:
    """Density matrix rho with L rho = 0 and tr rho = 1.

    Solves the linear system obtained by replacing one row of L with the
    trace functional (deterministic, no eigendecomposition).  The result is
    symmetrised, rho <- (rho + rho^+)/2, and its residual ||L vec(rho)||
    must stay below 1e-9.

    Raises
    ------
    DegenerateSteadyState
        If the null space of L has dimension > 1 within tolerance.
    NumericsError
        If the linear solve fails or leaves a large residual.
    """
    d = _hilbert_dim(lv)
    a = np.array(lv, dtype=complex)
    # Trace functional row: picks the diagonal entries of vec(rho).
    trace_row = np.zeros(d * d, dtype=complex)
    trace_row[:: d + 1] = 1.0
    a[0, :] = trace_row
    b = np.zeros(d * d, dtype=complex)
    b[0] = 1.0
    try:
        x = scipy.linalg.solve(a, b)
    except scipy.linalg.LinAlgError as exc:
        null_dim = _null_space_dimension(lv, 1e-9)
        if null_dim > 1:
            raise DegenerateSteadyState(null_dim, 1e-9) from exc
        raise NumericsError(f"steady-state linear solve failed: {exc}") from exc

    rho = unvec(x)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real

    residual = float(np.linalg.norm(lv @ vec(rho)))
    if not np.isfinite(residual) or residual > RESIDUAL_TOL:
        null_dim = _null_space_dimension(lv, 1e-9)
        if null_dim > 1:
            raise DegenerateSteadyState(null_dim, 1e-9)
        raise NumericsError(
            f"steady-state residual {residual:.3e} exceeds {RESIDUAL_TOL:g}"
        )
    return rho


def evolve(lv: np.ndarray, rho0: np.ndarray, times: np.ndarray) -> list[np.ndarray]:
    """Density matrices rho(t) for each entry of `times`.

    Propagates vec(rho) with dense scaling-and-squaring matrix
    exponentials over the successive intervals of the (strictly
    increasing, non-negative) time grid.

    Raises
    ------
    NumericsError
        On overflow or loss of trace beyond 1e-8 at any output time.
    """
    d = _hilbert_dim(lv)
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (d, d):
        raise ValueError(f"rho0 shape {rho0.shape} does not match dimension {d}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-D array")
    if times[0] < 0.0 or np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be non-negative and strictly increasing")

    out = []
    v = vec(rho0)
    t_prev = 0.0
    for t in times:
        dt = t - t_prev
        if dt > 0.0:
            v = scipy.linalg.expm(lv * dt) @ v
        t_prev = t
        if not np.all(np.isfinite(v)):
            raise NumericsError(f"propagation overflowed at t = {t:g}")
        rho = unvec(v)
        drift = abs(np.trace(rho) - 1.0)
        if drift > 1e-8:
            raise NumericsError(
                f"trace drifted by {drift:.3e} at t = {t:g} (> 1e-8)"
            )
        out.append(rho)
    return out


def liouvillian_gap(lv: np.ndarray) -> tuple[float, float]:
    """Spectral gap of the Liouvillian and the derived preparation time.

    Returns ``(gap, tau)`` where ``gap = -max{Re l : Re l < -1e-9}`` over
    the eigenvalues of L and ``tau = 1/gap``.  Eigenvalues sharing the
    maximal negative real part are reported once.

    Raises
    ------
    NumericsError
        If every eigenvalue sits at zero within tolerance.
    """
    _hilbert_dim(lv)
    ev = np.linalg.eigvals(lv)
    re = ev.real
    decaying = re[re < -GAP_TOL_ZERO]
    if decaying.size == 0:
        raise NumericsError(
            "all Liouvillian eigenvalues vanish within tolerance; no gap"
        )
    gap = float(-np.max(decaying))
    return gap, 1.0 / gap
