"""Density-matrix-element inequalities certifying non-k-separability.

Both criteria have the same shape::

    sum |rho[r, c]|  <=  sum sqrt(rho[a, a] * rho[b, b])  +  (N - k)/2 * sum rho[t, t]

and differ only in which index sets are summed.  ``dicke`` sets come from
m-excitation qubit labels, ``qudit_w`` sets from permutations of
``0..N-1`` on N qudits of dimension N.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

from .states import DensityMatrix, MalformedStateError, index_from_bit_positions, one_based_index

DEFAULT_TOLERANCE = 1e-9

Pairs = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class IndexSets1:
    n: int
    m: int
    lhs_pairs: Pairs
    sqrt_pairs: Pairs
    diag_indices: Tuple[int, ...]
    degenerate: bool = False


@dataclass(frozen=True)
class IndexSets2:
    n: int
    d: int
    lhs_pairs: Pairs
    sqrt_pairs: Pairs
    diag_indices: Tuple[int, ...]


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    n: int
    k: int
    lhs: float
    rhs: float
    tolerance: float
    m: int | None = None
    note: str = ""

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def violated(self) -> bool:
        return self.margin > self.tolerance

    @property
    def ratio(self) -> float:
        """``rhs / lhs``; below 1 means the inequality is violated."""
        return self.rhs / self.lhs if self.lhs else math.inf


@lru_cache(maxsize=None)
def index_sets_criterion1(n: int, m: int) -> IndexSets1:
    """Index sets of the m-excitation qubit criterion.

    LHS pairs join two m-subsets of bit positions sharing m-1 positions.  Each
    such pair maps one-to-one onto the diagonal pair (intersection, union).
    """
    if n < 2:
        raise ValueError("need at least two qubits")
    if not 1 <= m <= n - 1:
        return IndexSets1(n, m, (), (), (), degenerate=True)
    positions = range(n)
    msets = list(itertools.combinations(positions, m))
    lhs = []
    for a, b in itertools.combinations(msets, 2):
        if len(set(a) & set(b)) == m - 1:
            r, c = index_from_bit_positions(a), index_from_bit_positions(b)
            lhs.append((min(r, c), max(r, c)))
    sqrt = []
    for low in itertools.combinations(positions, m - 1):
        rest = [p for p in positions if p not in low]
        for extra in itertools.combinations(rest, 2):
            sqrt.append((index_from_bit_positions(low), index_from_bit_positions(low + extra)))
    diag = sorted(index_from_bit_positions(s) for s in msets)
    return IndexSets1(n, m, tuple(sorted(lhs)), tuple(sorted(sqrt)), tuple(diag))


def criterion1_pair_map(n: int, m: int) -> dict:
    """LHS pair -> (index of P∩Q, index of P∪Q) for the qubit criterion."""
    out = {}
    for a, b in itertools.combinations(itertools.combinations(range(n), m), 2):
        if len(set(a) & set(b)) == m - 1:
            r, c = sorted((index_from_bit_positions(a), index_from_bit_positions(b)))
            out[(r, c)] = (
                index_from_bit_positions(set(a) & set(b)),
                index_from_bit_positions(set(a) | set(b)),
            )
    return out


def _criterion2_terms(n: int):
    # yields (P, Q, R, S) label tuples, P < Q in index order
    for perm in itertools.permutations(range(n)):
        for i, j in itertools.combinations(range(n), 2):
            a, b = perm[i], perm[j]
            if a > b:
                continue
            q = list(perm)
            q[i], q[j] = b, a
            r = list(perm)
            r[j] = a
            s = list(perm)
            s[i] = b
            yield perm, tuple(q), tuple(r), tuple(s)


@lru_cache(maxsize=None)
def index_sets_criterion2(n: int) -> IndexSets2:
    """Index sets of the N-qudit W criterion (local dimension ``d = n``).

    LHS pairs are permutation labels differing by one transposition.  The
    paired diagonal labels copy the smaller swapped digit onto both differing
    positions (R) and the larger one onto both (S).
    """
    if n < 2:
        raise ValueError("criterion 2 needs n >= 2")
    d = n
    lhs, sqrt = [], []
    for p, q, r, s in _criterion2_terms(n):
        lhs.append((one_based_index(p, d), one_based_index(q, d)))
        sqrt.append((one_based_index(r, d), one_based_index(s, d)))
    diag = sorted(one_based_index(p, d) for p in itertools.permutations(range(n)))
    return IndexSets2(n, d, tuple(sorted(lhs)), tuple(sorted(sqrt)), tuple(diag))


def criterion2_pair_map(n: int) -> dict:
    """LHS pair -> (R index, S index) for the qudit criterion."""
    return {
        (one_based_index(p, n), one_based_index(q, n)): (one_based_index(r, n), one_based_index(s, n))
        for p, q, r, s in _criterion2_terms(n)
    }


def evaluate_sets(
    sets,
    get: Callable[[int, int], complex],
    n: int,
    k: int,
    tolerance: float = DEFAULT_TOLERANCE,
) -> tuple[float, float]:
    """Return ``(lhs, rhs)`` for any element accessor ``get(row, col)``."""

    def diag(i):
        v = get(i, i).real
        if v < -abs(tolerance):
            raise MalformedStateError(f"negative diagonal element rho[{i},{i}] = {v}")
        return max(v, 0.0)

    lhs = sum(abs(get(r, c)) for r, c in sets.lhs_pairs)
    rhs = sum(math.sqrt(diag(a) * diag(b)) for a, b in sets.sqrt_pairs)
    rhs += (n - k) / 2 * sum(diag(t) for t in sets.diag_indices)
    return float(lhs), float(rhs)


def _check_k(n: int, k: int):
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")


def evaluate_criterion1(
    rho: DensityMatrix, n: int, m: int, k: int, tolerance: float = DEFAULT_TOLERANCE
) -> CriterionReport:
    """Evaluate the m-excitation qubit inequality at separability level ``k``."""
    if rho.d != 2 or rho.n != n:
        raise ValueError(f"expected a {n}-qubit state, got n={rho.n}, d={rho.d}")
    _check_k(n, k)
    sets = index_sets_criterion1(n, m)
    if sets.degenerate:
        return CriterionReport("dicke", n, k, 0.0, 0.0, tolerance, m=m,
                               note=f"m={m} has no admissible pairs; inequality holds trivially")
    lhs, rhs = evaluate_sets(sets, rho.element, n, k, tolerance)
    return CriterionReport("dicke", n, k, lhs, rhs, tolerance, m=m)


def evaluate_criterion2(
    rho: DensityMatrix, n: int, k: int, tolerance: float = DEFAULT_TOLERANCE
) -> CriterionReport:
    """Evaluate the N-qudit W inequality at separability level ``k``."""
    if rho.d != n or rho.n != n:
        raise ValueError(f"expected {n} qudits of dimension {n}, got n={rho.n}, d={rho.d}")
    _check_k(n, k)
    lhs, rhs = evaluate_sets(index_sets_criterion2(n), rho.element, n, k, tolerance)
    return CriterionReport("qudit_w", n, k, lhs, rhs, tolerance)
