"""Local observables whose expectation values reconstruct matrix elements.

Factor labels are strings:

* ``"I"``, ``"X"``, ``"Y"``, ``"Z"`` -- identity and Pauli matrices (qubits),
* ``"L(j,k)"``, ``"M(j,k)"`` -- symmetric / antisymmetric generalized Gell-Mann matrices,
* ``"E(l)"`` -- diagonal generalized Gell-Mann matrix,
* ``"P(j)"`` -- the local projector ``|j><j|``.

Normalization: for an off-diagonal target ``(row, col)`` the ``real`` set
assembles to ``|x><y| + |y><x|`` and the ``imag`` set to
``i(|x><y| - |y><x|)``, so their expectations are ``2 Re rho[row, col]`` and
``2 Im rho[row, col]``.  Diagonal sets assemble to the projector ``|x><x|``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Sequence, Tuple

import numpy as np

from .criteria import evaluate_sets, index_sets_criterion1, index_sets_criterion2
from .states import DensityMatrix, label_from_index

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_LABEL_RE = re.compile(r"^([LMEP])\((\d+)(?:,(\d+))?\)$")

Expansion = Dict[str, complex]


def ggm_lambda(j: int, k: int, d: int) -> np.ndarray:
    out = np.zeros((d, d), dtype=complex)
    out[j, k] = out[k, j] = 1
    return out


def ggm_mu(j: int, k: int, d: int) -> np.ndarray:
    out = np.zeros((d, d), dtype=complex)
    out[j, k] = -1j
    out[k, j] = 1j
    return out


def ggm_eta(l: int, d: int) -> np.ndarray:
    diag = np.zeros(d)
    diag[: l + 1] = 1
    diag[l + 1] = -(l + 1)
    return np.sqrt(2 / ((l + 1) * (l + 2))) * np.diag(diag).astype(complex)


def ggm_labels(d: int) -> list[str]:
    if d < 2:
        raise ValueError("GGM basis needs d >= 2")
    pairs = list(itertools.combinations(range(d), 2))
    return [f"L({j},{k})" for j, k in pairs] + [f"M({j},{k})" for j, k in pairs] + [f"E({l})" for l in range(d - 1)]


def ggm_basis(d: int) -> list[np.ndarray]:
    """The ``d**2 - 1`` traceless Hermitian GGM matrices: all lambda, then mu, then eta."""
    return [local_matrix(lab, d) for lab in ggm_labels(d)]


@lru_cache(maxsize=None)
def _local_matrix(label: str, d: int) -> np.ndarray:
    if label in PAULI:
        if label != "I" and d != 2:
            raise ValueError(f"Pauli label {label} needs d = 2")
        return np.eye(d, dtype=complex) if label == "I" else PAULI[label]
    match = _LABEL_RE.match(label)
    if not match:
        raise ValueError(f"unknown local operator label {label!r}")
    kind, a, b = match.group(1), int(match.group(2)), match.group(3)
    if kind in "LM":
        if b is None or not 0 <= a < int(b) <= d - 1:
            raise ValueError(f"bad GGM indices in {label!r} for d={d}")
        return (ggm_lambda if kind == "L" else ggm_mu)(a, int(b), d)
    if kind == "E":
        if not 0 <= a <= d - 2:
            raise ValueError(f"bad eta index in {label!r} for d={d}")
        return ggm_eta(a, d)
    if not 0 <= a <= d - 1:
        raise ValueError(f"bad projector index in {label!r} for d={d}")
    out = np.zeros((d, d), dtype=complex)
    out[a, a] = 1
    return out


def local_matrix(label: str, d: int) -> np.ndarray:
    m = _local_matrix(label, d)
    m.flags.writeable = False
    return m


def ketbra_decomposition(j: int, k: int, d: int) -> Expansion:
    """Expand ``|j><k|`` in GGM labels plus ``"I"``."""
    if not (0 <= j < d and 0 <= k < d):
        raise ValueError(f"indices ({j}, {k}) out of range for d={d}")
    if j < k:
        return {f"L({j},{k})": 0.5, f"M({j},{k})": 0.5j}
    if j > k:
        return {f"L({k},{j})": 0.5, f"M({k},{j})": -0.5j}
    out: Expansion = {}
    if j > 0:
        out[f"E({j - 1})"] = -math.sqrt(j / (2 * (j + 1)))
    for m in range(d - j - 1):
        out[f"E({j + m})"] = 1 / math.sqrt(2 * (j + m + 1) * (j + m + 2))
    out["I"] = 1 / d
    return out


def assemble_local(expansion: Expansion, d: int) -> np.ndarray:
    return sum(c * local_matrix(lab, d) for lab, c in expansion.items())


_QUBIT_NAMES = {"L(0,1)": "X", "M(0,1)": "Y", "E(0)": "Z", "I": "I"}


def _to_pauli(expansion: Expansion) -> Expansion:
    return {_QUBIT_NAMES[lab]: c for lab, c in expansion.items()}


@dataclass(frozen=True)
class ObservableTerm:
    coefficient: float
    factors: Tuple[str, ...]

    def __post_init__(self):
        if not math.isfinite(self.coefficient) or self.coefficient == 0:
            raise ValueError("observable coefficient must be finite and non-zero")

    def to_json(self) -> dict:
        return {"coefficient": self.coefficient, "factors": list(self.factors)}


@dataclass(frozen=True)
class ObservableSet:
    """Sum of local terms targeting one matrix element.

    ``part`` is ``"real"``, ``"imag"`` or ``"diagonal"``.
    """

    target: Tuple[int, int]
    part: str
    terms: Tuple[ObservableTerm, ...]
    n: int
    d: int

    @cached_property
    def matrix(self) -> np.ndarray:
        dim = self.d**self.n
        out = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            op = np.ones((1, 1), dtype=complex)
            for lab in t.factors:
                op = np.kron(op, local_matrix(lab, self.d))
            out += t.coefficient * op
        return out

    def expectation(self, rho) -> float:
        """``Tr(rho A)`` for a dense array or :class:`DensityMatrix`."""
        if isinstance(rho, DensityMatrix):
            rho = rho.to_dense()
        return float(np.real(np.sum(np.asarray(rho) * self.matrix.T)))

    def value(self, rho) -> float:
        """The reconstructed real part, imaginary part or diagonal entry."""
        e = self.expectation(rho)
        return e if self.part == "diagonal" else e / 2


def sign_exponent(basis: Sequence[int], pattern: Sequence[str]) -> int:
    """Number of subsystems in state 1 that carry a ``Z`` in ``pattern``."""
    if len(basis) != len(pattern):
        raise ValueError("basis and pattern lengths differ")
    return sum(1 for b, op in zip(basis, pattern) if b == 1 and op == "Z")


def _iz_patterns(length: int):
    # all I/Z strings, more Z first
    for s in range(length + 1):
        for zs in itertools.combinations(range(length), length - s):
            yield tuple("Z" if i in zs else "I" for i in range(length))


@lru_cache(maxsize=None)
def pauli_diag_observable(n: int, row: int) -> ObservableSet:
    """``|x><x|`` as ``2**n`` signed I/Z strings with weight ``1/2**n``."""
    basis = label_from_index(row, n, 2)
    scale = 1 / 2**n
    terms = tuple(
        ObservableTerm((-1) ** sign_exponent(basis, pat) * scale, pat) for pat in _iz_patterns(n)
    )
    return ObservableSet((row, row), "diagonal", terms, n, 2)


def _differing(x, y):
    return [i for i, (a, b) in enumerate(zip(x, y)) if a != b]


@lru_cache(maxsize=None)
def pauli_offdiag_observables(n: int, row: int, col: int) -> tuple[ObservableSet, ObservableSet]:
    """``(O, O~)`` for an element whose labels differ by a swapped 01/10 pair."""
    if row == col:
        raise ValueError("off-diagonal target needs row != col")
    x, y = label_from_index(row, n, 2), label_from_index(col, n, 2)
    diff = _differing(x, y)
    if len(diff) != 2 or x[diff[0]] == x[diff[1]]:
        raise ValueError(f"({row}, {col}) is not a single 01<->10 exchange")
    i, j = diff
    others = [l for l in range(n) if l not in diff]
    fixed = [x[l] for l in others]
    # O~ sign for x = ..0..1.. ; flips when x holds 1 at i
    orient = 1 if x[i] == 0 else -1
    scale = 1 / 2 ** (n - 1)
    re_terms, im_terms = [], []
    for pair, coeff, bucket in (
        ("XX", 1, re_terms), ("YY", 1, re_terms), ("XY", orient, im_terms), ("YX", -orient, im_terms),
    ):
        for pat in _iz_patterns(n - 2):
            factors = list(pat)
            factors.insert(i, pair[0])
            factors.insert(j, pair[1])
            sign = (-1) ** sign_exponent(fixed, pat)
            bucket.append(ObservableTerm(coeff * sign * scale, tuple(factors)))
    return (
        ObservableSet((row, col), "real", tuple(re_terms), n, 2),
        ObservableSet((row, col), "imag", tuple(im_terms), n, 2),
    )


def _expand_product(site_expansions: Sequence[Expansion]) -> Dict[Tuple[str, ...], complex]:
    out: Dict[Tuple[str, ...], complex] = {}
    for combo in itertools.product(*(list(e.items()) for e in site_expansions)):
        coeff = 1 + 0j
        for _, c in combo:
            coeff *= c
        key = tuple(lab for lab, _ in combo)
        out[key] = out.get(key, 0) + coeff
    return out


def _hermitian_parts(expanded, n, d, target):
    # A = sum c F with Hermitian F:  A + A^dag -> 2 Re c,  i(A - A^dag) -> -2 Im c
    re_terms, im_terms = [], []
    for factors, c in expanded.items():
        if abs(c.real) > 1e-15:
            re_terms.append(ObservableTerm(2 * c.real, factors))
        if abs(c.imag) > 1e-15:
            im_terms.append(ObservableTerm(-2 * c.imag, factors))
    return (
        ObservableSet(target, "real", tuple(re_terms), n, d),
        ObservableSet(target, "imag", tuple(im_terms), n, d),
    )


@lru_cache(maxsize=None)
def qudit_offdiag_observables(n: int, d: int, row: int, col: int) -> tuple[ObservableSet, ObservableSet]:
    """GGM observables ``(Q + Q~, i(Q - Q~))``-style pair for a swapped-digit element."""
    x, y = label_from_index(row, n, d), label_from_index(col, n, d)
    diff = _differing(x, y)
    if len(diff) != 2 or x[diff[0]] != y[diff[1]] or x[diff[1]] != y[diff[0]]:
        raise ValueError(f"({row}, {col}) is not a two-site digit exchange")
    sites = [
        ketbra_decomposition(x[l], y[l], d) if l in diff else {f"P({x[l]})": 1.0}
        for l in range(n)
    ]
    return _hermitian_parts(_expand_product(sites), n, d, (row, col))


@lru_cache(maxsize=None)
def qudit_diag_observable(n: int, d: int, row: int) -> ObservableSet:
    """``D_d``: the product of local projectors onto the row's digits."""
    x = label_from_index(row, n, d)
    return ObservableSet((row, row), "diagonal", (ObservableTerm(1.0, tuple(f"P({j})" for j in x)),), n, d)


def qudit_observables(n: int, d: int, row: int, col: int | None = None):
    """Diagonal set for ``row`` alone, else the ``(real, imag)`` pair."""
    if col is None or col == row:
        return qudit_diag_observable(n, d, row)
    return qudit_offdiag_observables(n, d, row, col)


def observable_count_dicke(n: int, m: int) -> int:
    if not 1 <= m <= n - 1:
        raise ValueError("need 1 <= m <= n-1")
    return (n - m) * m * math.comb(n, m) * 2 ** (n - 1) // 2 + 2**n


def observable_count_qudit(n: int, d: int) -> int:
    if n < 2 or d != n:
        raise ValueError("need d = n >= 2")
    return 2 * n * math.factorial(n) // math.factorial(n - 2) + d**n


def inventory_dicke(n: int, m: int) -> list[ObservableSet]:
    """Observables for every LHS element of the qubit criterion plus every diagonal entry."""
    sets = []
    for r, c in index_sets_criterion1(n, m).lhs_pairs:
        sets.extend(pauli_offdiag_observables(n, r, c))
    sets.extend(pauli_diag_observable(n, r) for r in range(1, 2**n + 1))
    return sets


def inventory_qudit(n: int) -> list[ObservableSet]:
    """Observables for every LHS element of the qudit criterion plus every diagonal entry."""
    d = n
    sets = []
    for r, c in index_sets_criterion2(n).lhs_pairs:
        sets.extend(qudit_offdiag_observables(n, d, r, c))
    sets.extend(qudit_diag_observable(n, d, r) for r in range(1, d**n + 1))
    return sets


def distinct_patterns(sets) -> list[Tuple[str, ...]]:
    seen = {}
    for s in sets:
        for t in s.terms:
            seen.setdefault(t.factors, None)
    return list(seen)


def _measured_getter(rho, offdiag, diag):
    dense = rho.to_dense() if isinstance(rho, DensityMatrix) else np.asarray(rho)
    cache = {}

    def get(r, c):
        if (r, c) not in cache:
            if r == c:
                cache[(r, c)] = complex(diag(r).value(dense))
            else:
                re_set, im_set = offdiag(r, c)
                cache[(r, c)] = complex(re_set.value(dense), im_set.value(dense))
        return cache[(r, c)]

    return get


def evaluate_criterion1_via_observables(rho, n: int, m: int, k: int, tolerance: float = 1e-9):
    """``(lhs, rhs)`` of the qubit criterion from Pauli expectation values."""
    get = _measured_getter(
        rho, lambda r, c: pauli_offdiag_observables(n, r, c), lambda r: pauli_diag_observable(n, r)
    )
    return evaluate_sets(index_sets_criterion1(n, m), get, n, k, tolerance)


def evaluate_criterion2_via_observables(rho, n: int, k: int, tolerance: float = 1e-9):
    """``(lhs, rhs)`` of the qudit criterion from GGM / projector expectation values."""
    get = _measured_getter(
        rho, lambda r, c: qudit_offdiag_observables(n, n, r, c), lambda r: qudit_diag_observable(n, n, r)
    )
    return evaluate_sets(index_sets_criterion2(n), get, n, k, tolerance)
