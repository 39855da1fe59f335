import numpy as np
import pytest
from scipy.special import hankel1

from qtopo.greens import freespace_green_2d


def oracle(k0, rho):
    return 0.25j * hankel1(0, k0 * rho)


def test_reference_value_unit_argument():
    # Frozen table values: J0(1) = 0.76520, Y0(1) = 0.08826.
    g = freespace_green_2d(1.0, 1.0)
    assert g.real == pytest.approx(-0.0220642, abs=1e-6)
    assert g.imag == pytest.approx(0.1912994, abs=1e-6)


def test_matches_scipy_series_regime():
    for x in np.linspace(0.01, 7.9, 80):
        rel = abs(freespace_green_2d(1.0, x) - oracle(1.0, x)) / abs(oracle(1.0, x))
        assert rel < 1e-10


def test_matches_scipy_asymptotic_regime():
    for x in np.linspace(8.0, 60.0, 80):
        rel = abs(freespace_green_2d(1.0, x) - oracle(1.0, x)) / abs(oracle(1.0, x))
        assert rel < 1e-6


def test_imaginary_part_at_small_argument():
    # Im G -> J0(0)/4 = 1/4.
    assert freespace_green_2d(1.0, 1e-9).imag == pytest.approx(0.25, abs=1e-12)


def test_amplitude_decay_exponent():
    # |G| ~ (k0 rho)^(-1/2) asymptotically.
    r1, r2 = 20.0, 80.0
    ratio = abs(freespace_green_2d(1.0, r2)) / abs(freespace_green_2d(1.0, r1))
    assert ratio == pytest.approx(np.sqrt(r1 / r2), rel=2e-3)


def test_wavenumber_scaling():
    assert freespace_green_2d(2.0, 3.0) == pytest.approx(
        freespace_green_2d(1.0, 6.0), rel=1e-12
    )


def test_rejects_zero_distance():
    with pytest.raises(ValueError):
        freespace_green_2d(1.0, 0.0)
