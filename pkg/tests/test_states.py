import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksep.states import (
    DensityMatrix,
    MalformedStateError,
    PureState,
    anti_w_state,
    dicke_state,
    element,
    index_from_bit_positions,
    label_from_index,
    one_based_index,
    projector,
    qudit_w_state,
    white_noise_mixture,
)


def test_dicke_4_3_example():
    psi = dicke_state(4, 3)
    assert sorted(psi.amplitudes) == [(0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0)]
    for amp in psi.amplitudes.values():
        assert amp == pytest.approx(1 / math.sqrt(4))


def test_dicke_no_excitation():
    psi = dicke_state(5, 0)
    assert psi.amplitudes == {(0, 0, 0, 0, 0): 1.0}


def test_dicke_4_2_against_bitstring_enumeration():
    brute = [bits for bits in itertools.product((0, 1), repeat=4) if sum(bits) == 2]
    psi = dicke_state(4, 2)
    assert sorted(psi.amplitudes) == sorted(brute)
    assert len(brute) == 6
    assert all(a == pytest.approx(1 / math.sqrt(6)) for a in psi.amplitudes.values())


@pytest.mark.parametrize("n,m", [(3, 4), (0, 0), (2, -1)])
def test_dicke_invalid(n, m):
    with pytest.raises(ValueError):
        dicke_state(n, m)


def test_qutrit_w_example():
    psi = qudit_w_state(3)
    labels = ["".join(map(str, lab)) for lab in psi.support()]
    assert labels == ["012", "021", "102", "120", "201", "210"]
    assert psi.d == 3
    assert all(a == pytest.approx(1 / math.sqrt(6)) for a in psi.amplitudes.values())


def test_ququart_w_example():
    psi = qudit_w_state(4)
    labels = ["".join(map(str, lab)) for lab in psi.support()]
    assert len(labels) == 24
    assert labels[0] == "0123" and labels[-1] == "3210"
    assert all(a == pytest.approx(1 / math.sqrt(24)) for a in psi.amplitudes.values())


def test_single_qudit_w():
    psi = qudit_w_state(1)
    assert psi.amplitudes == {(0,): 1.0}


def test_qudit_w_invalid():
    with pytest.raises(ValueError):
        qudit_w_state(0)


def test_anti_w_is_dicke_n_minus_1():
    assert anti_w_state(4).amplitudes == dicke_state(4, 3).amplitudes


def test_unnormalized_state_rejected():
    with pytest.raises(ValueError):
        PureState(2, 2, {(0, 0): 1.0, (1, 1): 1.0})


def test_index_convention_matches_bit_positions():
    # bits set at positions 0 and 1 (last two qubits) -> row 4, as in rho_{4,6}
    assert index_from_bit_positions([0, 1]) == 4
    assert one_based_index((0, 0, 1, 1), 2) == 4
    assert one_based_index((0, 1, 0, 1), 2) == 6
    # 3-qutrit: 012 -> 6, 021 -> 8
    assert one_based_index((0, 1, 2), 3) == 6
    assert one_based_index((0, 2, 1), 3) == 8


@given(st.integers(1, 5), st.integers(2, 4), st.data())
def test_label_index_round_trip(n, d, data):
    idx = data.draw(st.integers(1, d**n))
    assert one_based_index(label_from_index(idx, n, d), d) == idx


def test_white_noise_endpoints():
    psi = dicke_state(4, 2)
    pure = white_noise_mixture(psi, 0.0)
    assert np.allclose(pure.to_dense(), np.outer(psi.to_vector(), psi.to_vector().conj()))
    mixed = white_noise_mixture(psi, 1.0)
    assert np.allclose(mixed.to_dense(), np.eye(16) / 16)


def test_white_noise_diagonal_value():
    rho = white_noise_mixture(dicke_state(4, 2), 0.5)
    assert rho.element(4, 4) == pytest.approx(0.5 / 6 + 0.5 / 16, abs=1e-15)


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_white_noise_rejects_bad_p(p):
    with pytest.raises(ValueError):
        white_noise_mixture(dicke_state(3, 1), p)


def test_element_access():
    rho = projector(dicke_state(4, 2))
    assert element(rho, 4, 6) == pytest.approx(1 / 6)
    assert element(rho, 1, 16) == 0
    assert element(rho, 6, 4) == np.conj(element(rho, 4, 6))
    with pytest.raises(ValueError):
        element(rho, 0, 3)
    with pytest.raises(ValueError):
        element(rho, 1, 17)


def _states():
    yield from (dicke_state(n, m) for n in range(1, 7) for m in range(n + 1))
    yield from (qudit_w_state(n) for n in range(1, 5))


@pytest.mark.parametrize("psi", list(_states()), ids=lambda s: f"n{s.n}d{s.d}|{len(s.amplitudes)}")
def test_unit_trace_and_support_size(psi):
    rho = white_noise_mixture(psi, 0.3)
    assert rho.trace() == pytest.approx(1.0, abs=1e-12)
    if psi.d == 2 and psi.n > 1:
        m = sum(next(iter(psi.amplitudes)))
        assert len(psi.amplitudes) == math.comb(psi.n, m)


@given(st.floats(0, 1), st.sampled_from([(4, 2), (5, 1), (3, 3)]))
@settings(max_examples=30)
def test_white_noise_affine_in_p(p, nm):
    psi = dicke_state(*nm) if nm != (3, 3) else qudit_w_state(3)
    r0, r1, rp = (white_noise_mixture(psi, x).to_dense() for x in (0.0, 1.0, p))
    assert np.allclose(rp, (1 - p) * r0 + p * r1, atol=1e-15, rtol=0)


def test_density_matrix_validation():
    with pytest.raises(MalformedStateError):
        DensityMatrix(1, 2, {(1, 1): 0.5})
    with pytest.raises(MalformedStateError):
        DensityMatrix(1, 2, {(1, 1): 1.5, (2, 2): -0.5})
    with pytest.raises(ValueError):
        DensityMatrix(1, 2, {(2, 1): 0.1, (1, 1): 0.5, (2, 2): 0.5})
    with pytest.raises(MalformedStateError):
        DensityMatrix.from_dense([[0.5, 1], [0, 0.5]], 1, 2)


def test_from_dense_round_trip():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    dm = DensityMatrix.from_dense(rho, 3, 2)
    assert np.allclose(dm.to_dense(), rho, atol=1e-15)
