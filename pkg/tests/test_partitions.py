import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksep.criteria import evaluate_criterion1
from ksep.partitions import (
    Partition,
    bell_number,
    count_partitions_formula,
    enumerate_partitions,
    product_state_vector,
    random_k_separable_state,
    random_partition,
    stirling2,
)


def surjection_count(n, k):
    """Brute force: surjections {1..n} -> {1..k} divided by k!."""
    hits = sum(1 for f in itertools.product(range(k), repeat=n) if len(set(f)) == k)
    return hits // math.factorial(k)


def test_six_three_is_ninety():
    assert count_partitions_formula(6, 3) == 90
    assert len(enumerate_partitions(6, 3)) == 90


def test_formula_terms_for_six_three():
    # 3+2+1 -> 60, 4+1+1 -> 15, 2+2+2 -> 15
    assert math.factorial(6) // (6 * 2 * 1) == 60
    assert math.factorial(6) // (2 * 24) == 15
    assert math.factorial(6) // (6 * 8) == 15


def test_edge_counts():
    for n in range(1, 8):
        assert len(enumerate_partitions(n, n)) == 1
        assert count_partitions_formula(n, 1) == 1
    assert len(enumerate_partitions(4, 2)) == 7


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 8) for k in range(1, n + 1)])
def test_stirling_against_surjections(n, k):
    assert stirling2(n, k) == surjection_count(n, k)


def test_ten_four():
    assert count_partitions_formula(10, 4) == len(enumerate_partitions(10, 4)) == stirling2(10, 4) == 34105


def test_bell_numbers():
    # B(0..10)
    assert [bell_number(n) for n in range(11)] == [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]
    for n in range(1, 11):
        assert sum(count_partitions_formula(n, k) for k in range(1, n + 1)) == bell_number(n)


@pytest.mark.parametrize("n,k", [(0, 0), (3, 0), (3, 4)])
def test_invalid(n, k):
    with pytest.raises(ValueError):
        enumerate_partitions(n, k)
    with pytest.raises(ValueError):
        count_partitions_formula(n, k)


def test_partitions_are_canonical_and_distinct():
    parts = enumerate_partitions(5, 3)
    assert len(set(parts)) == len(parts)
    for p in parts:
        assert p.k == 3
        assert sorted(x for b in p.blocks for x in b) == [1, 2, 3, 4, 5]
        assert [b[0] for b in p.blocks] == sorted(b[0] for b in p.blocks)
        assert Partition.from_blocks(reversed(p.blocks)) == p


def test_partition_str():
    assert str(Partition.from_blocks([(4, 5), (1, 2, 3), (6,)])) == "ABC|DE|F"


@given(st.integers(1, 8), st.data(), st.integers(0, 2**32 - 1))
@settings(max_examples=50)
def test_random_partition_valid(n, data, seed):
    k = data.draw(st.integers(1, n))
    p = random_partition(n, k, np.random.default_rng(seed))
    assert p.k == k and p.n == n
    assert p in set(enumerate_partitions(n, k))


def test_fully_separable_sample_factorizes():
    rho = random_k_separable_state(3, 3, 2, terms=1, seed=5).to_dense()
    # pure product: rank one and every 2x2 minor of the amplitude outer product vanishes
    w = np.linalg.eigvalsh(rho)
    assert w[-1] == pytest.approx(1.0, abs=1e-12)
    psi = np.linalg.eigh(rho)[1][:, -1].reshape(2, 2, 2)
    for axis in range(3):
        mat = np.moveaxis(psi, axis, 0).reshape(2, 4)
        assert np.linalg.matrix_rank(mat, tol=1e-10) == 1


def test_product_state_respects_partition():
    rng = np.random.default_rng(3)
    part = Partition.from_blocks([(1, 3), (2,)])
    psi = product_state_vector(part, 2, rng).reshape(2, 2, 2)
    # qubit 2 factors out; qubits 1 and 3 generically entangled
    assert np.linalg.matrix_rank(np.moveaxis(psi, 1, 0).reshape(2, 4), tol=1e-10) == 1
    assert np.linalg.matrix_rank(psi.reshape(2, 4), tol=1e-10) == 2


def test_sampler_deterministic():
    a = random_k_separable_state(4, 2, 2, terms=3, seed=42)
    b = random_k_separable_state(4, 2, 2, terms=3, seed=42)
    assert a.entries == b.entries
    c = random_k_separable_state(4, 2, 2, terms=3, seed=43)
    assert a.entries != c.entries


def test_sampler_passes_criterion():
    rho = random_k_separable_state(4, 2, 2, terms=5, seed=7)
    assert rho.trace() == pytest.approx(1.0, abs=1e-12)
    dense = rho.to_dense()
    assert np.allclose(dense, dense.conj().T)
    assert not evaluate_criterion1(rho, 4, 2, 2).violated


@pytest.mark.parametrize("args", [(3, 2, 1, 1), (3, 2, 2, 0), (2, 3, 2, 1)])
def test_sampler_invalid(args):
    n, k, d, terms = args
    with pytest.raises(ValueError):
        random_k_separable_state(n, k, d, terms=terms, seed=0)
