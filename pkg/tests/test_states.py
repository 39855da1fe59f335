import numpy as np
import pytest

from qtopo.metrics import fidelity
from qtopo.states import basis_index, basis_labels, bell_state, ket, w_state


def test_basis_ordering_two_qubits():
    assert basis_labels(2) == ["gg", "ge", "eg", "ee"]
    assert basis_index("ge") == 1
    assert basis_index("eg") == 2


def test_bell_even():
    v = bell_state(+1)
    assert np.allclose(v, [0.0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0.0])


def test_bell_odd():
    v = bell_state(-1)
    assert np.allclose(v, [0.0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0.0])


def test_bell_normalised():
    for parity in (+1, -1):
        assert abs(np.linalg.norm(bell_state(parity)) - 1.0) < 1e-12


def test_bell_rejects_bad_parity():
    with pytest.raises(ValueError):
        bell_state(0)


def test_w_state_amplitudes():
    w = w_state()
    assert abs(w[basis_index("gge")] - 1 / np.sqrt(3)) < 1e-15
    assert abs(w[basis_index("geg")] - 1 / np.sqrt(3)) < 1e-15
    assert abs(w[basis_index("egg")] - 1 / np.sqrt(3)) < 1e-15
    assert w[basis_index("ggg")] == 0.0
    assert abs(np.linalg.norm(w) - 1.0) < 1e-12


def test_w_state_self_fidelity():
    w = w_state()
    assert abs(fidelity(np.outer(w, w.conj()), w) - 1.0) < 1e-12


def test_ket_matches_index():
    v = ket("eg")
    assert v[2] == 1.0 and np.sum(np.abs(v)) == 1.0
