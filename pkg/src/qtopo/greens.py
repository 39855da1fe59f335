"""Analytic free-space Green's function of the 2-D Helmholtz operator.

G(rho) = (i/4) H0^(1)(k0 rho) solves (Lap + k0^2) G = -delta(r) with
outgoing-wave behaviour.  Used as the validation oracle for the FDFD
solver, so it is evaluated from its own series rather than through the
solver stack: an ascending power series below the switch point
``k0 rho = 8`` and the large-argument Hankel expansion above it.
"""

import numpy as np

__all__ = ["freespace_green_2d", "SERIES_SWITCH"]

EULER_GAMMA = 0.5772156649015329
SERIES_SWITCH = 8.0


def _j0_y0_series(x: float) -> tuple[float, float]:
    """Ascending series for J0 and Y0 (accurate for x below ~10)."""
    q = 0.25 * x * x
    # J0 = sum (-q)^k / (k!)^2 ; the Y0 sum carries harmonic numbers.
    term = 1.0
    j0 = 1.0
    ysum = 0.0
    harmonic = 0.0
    for k in range(1, 60):
        term *= -q / (k * k)
        j0 += term
        harmonic += 1.0 / k
        ysum -= term * harmonic  # (-1)^(k+1) H_k q^k/(k!)^2
        if abs(term) < 1e-18:
            break
    y0 = (2.0 / np.pi) * ((np.log(0.5 * x) + EULER_GAMMA) * j0 + ysum)
    return j0, y0


def _hankel1_0_asymptotic(x: float) -> complex:
    """Large-argument expansion of H0^(1), truncated at the smallest term."""
    total = 0.0 + 0.0j
    term = 1.0  # a_k / x^k with a_0 = 1
    ik = 1.0 + 0.0j
    for k in range(40):
        contrib = ik * term
        total += contrib
        nxt = term * (-((2 * k + 1) ** 2) / (8.0 * (k + 1) * x))
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-18:
            break
        term = nxt
        ik *= 1j
    return np.sqrt(2.0 / (np.pi * x)) * np.exp(1j * (x - 0.25 * np.pi)) * total


def freespace_green_2d(k0: float, rho: float) -> complex:
    """(i/4) H0^(1)(k0 rho); raises for rho <= 0 (log-singular real part)."""
    if rho <= 0.0:
        raise ValueError("freespace_green_2d requires rho > 0")
    x = k0 * rho
    if x < SERIES_SWITCH:
        j0, y0 = _j0_y0_series(x)
        h1 = j0 + 1j * y0
    else:
        h1 = _hankel1_0_asymptotic(x)
    return 0.25j * h1
