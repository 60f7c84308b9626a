"""Pure states, sparse density matrices and the basis index convention.

Basis labels are digit tuples with subsystem 1 first (most significant).
Matrix indices are 1-based, so the label ``(d_1, ..., d_N)`` sits at row
``sum(d_i * d**(N - i)) + 1``.  For qubits this is ``sum(2**p) + 1`` over the
set bit positions ``p``, with position 0 being the last qubit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np

ATOL = 1e-12

Label = Tuple[int, ...]


class MalformedStateError(ValueError):
    """A density matrix violates trace, Hermiticity or diagonal sign checks."""


def one_based_index(label: Iterable[int], d: int) -> int:
    """Row/column index of a basis label (1-based)."""
    idx = 0
    for digit in label:
        if not 0 <= digit < d:
            raise ValueError(f"digit {digit} out of range for local dimension {d}")
        idx = idx * d + digit
    return idx + 1


def label_from_index(index: int, n: int, d: int) -> Label:
    """Inverse of :func:`one_based_index`."""
    if not 1 <= index <= d**n:
        raise ValueError(f"index {index} outside 1..{d**n}")
    rest = index - 1
    digits = []
    for _ in range(n):
        rest, digit = divmod(rest, d)
        digits.append(digit)
    return tuple(reversed(digits))


def index_from_bit_positions(positions: Iterable[int]) -> int:
    """Qubit index ``sum(2**p) + 1``; position 0 is the last qubit."""
    return sum(1 << p for p in positions) + 1


@dataclass(frozen=True)
class PureState:
    n: int
    d: int
    amplitudes: Mapping[Label, complex]

    def __post_init__(self):
        if self.n < 1 or self.d < 2:
            raise ValueError("need n >= 1 and d >= 2")
        for label in self.amplitudes:
            if len(label) != self.n or any(not 0 <= x < self.d for x in label):
                raise ValueError(f"bad basis label {label!r}")
        norm = sum(abs(a) ** 2 for a in self.amplitudes.values())
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state not normalized (norm^2 = {norm!r})")

    @property
    def dim(self) -> int:
        return self.d**self.n

    def support(self) -> list[Label]:
        return sorted(self.amplitudes)

    def to_vector(self) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        for label, amp in self.amplitudes.items():
            vec[one_based_index(label, self.d) - 1] = amp
        return vec


@dataclass(frozen=True)
class DensityMatrix:
    """Sparse Hermitian matrix stored on the upper triangle.

    ``entries`` maps 1-based ``(row, col)`` with ``row <= col`` to the value.
    Reads below the diagonal return the complex conjugate; missing entries
    read as zero.
    """

    n: int
    d: int
    entries: Mapping[Tuple[int, int], complex] = field(repr=False)

    def __post_init__(self):
        dim = self.d**self.n
        for (r, c), val in self.entries.items():
            if not (1 <= r <= c <= dim):
                raise ValueError(f"entry ({r}, {c}) not in upper triangle of a {dim}x{dim} matrix")
            if r == c and abs(complex(val).imag) > ATOL:
                raise MalformedStateError(f"diagonal entry {r} is not real")
        tr = self.trace()
        if abs(tr - 1.0) > ATOL:
            raise MalformedStateError(f"trace is {tr!r}, expected 1")
        neg = [r for r in range(1, dim + 1) if self.element(r, r).real < -ATOL]
        if neg:
            raise MalformedStateError(f"negative diagonal at rows {neg[:5]}")

    @property
    def dim(self) -> int:
        return self.d**self.n

    def element(self, row: int, col: int) -> complex:
        dim = self.dim
        if not (1 <= row <= dim and 1 <= col <= dim):
            raise ValueError(f"index ({row}, {col}) outside 1..{dim}")
        if row <= col:
            return complex(self.entries.get((row, col), 0.0))
        return complex(self.entries.get((col, row), 0.0)).conjugate()

    def diag(self, row: int) -> float:
        return self.element(row, row).real

    def trace(self) -> float:
        return sum(complex(v).real for (r, c), v in self.entries.items() if r == c)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for (r, c), v in self.entries.items():
            out[r - 1, c - 1] = v
            if r != c:
                out[c - 1, r - 1] = np.conj(v)
        return out

    @classmethod
    def from_dense(cls, matrix, n: int, d: int, atol: float = 0.0) -> "DensityMatrix":
        """Wrap a dense Hermitian array; entries with modulus <= ``atol`` are dropped."""
        a = np.asarray(matrix, dtype=complex)
        dim = d**n
        if a.shape != (dim, dim):
            raise ValueError(f"expected shape {(dim, dim)}, got {a.shape}")
        if not np.allclose(a, a.conj().T, atol=1e-10, rtol=0):
            raise MalformedStateError("matrix is not Hermitian")
        rows, cols = np.triu_indices(dim)
        vals = a[rows, cols]
        keep = np.abs(vals) > atol
        entries: Dict[Tuple[int, int], complex] = {}
        for r, c, v in zip(rows[keep].tolist(), cols[keep].tolist(), vals[keep].tolist()):
            entries[(r + 1, c + 1)] = complex(v.real, 0.0) if r == c else v
        return cls(n, d, entries)


def element(rho: DensityMatrix, row: int, col: int) -> complex:
    return rho.element(row, col)


def dicke_state(n: int, m: int) -> PureState:
    """N-qubit Dicke state with ``m`` excitations."""
    if n < 1 or not 0 <= m <= n:
        raise ValueError(f"need n >= 1 and 0 <= m <= n, got n={n}, m={m}")
    amp = 1.0 / math.sqrt(math.comb(n, m))
    amplitudes = {}
    for ones in itertools.combinations(range(n), m):
        label = tuple(1 if i in ones else 0 for i in range(n))
        amplitudes[label] = amp
    return PureState(n, 2, amplitudes)


def anti_w_state(n: int) -> PureState:
    """Dicke state with ``n - 1`` excitations (the usual anti-W convention)."""
    if n < 2:
        raise ValueError("anti-W state needs n >= 2")
    return dicke_state(n, n - 1)


def qudit_w_state(n: int) -> PureState:
    """Equal superposition of all permutations of ``0, 1, ..., n-1`` on ``n`` qudits (d = n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    amp = 1.0 / math.sqrt(math.factorial(n))
    amplitudes = {perm: amp for perm in itertools.permutations(range(n))}
    # a single qudit of dimension 1 is not a valid system; keep d >= 2
    return PureState(n, max(n, 2), amplitudes)


def projector(psi: PureState) -> DensityMatrix:
    return white_noise_mixture(psi, 0.0)


def white_noise_mixture(psi: PureState, p: float) -> DensityMatrix:
    """``(1 - p)|psi><psi| + p I / d**N`` as a sparse matrix."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise fraction must lie in [0, 1], got {p}")
    dim = psi.dim
    items = [(one_based_index(lab, psi.d), amp) for lab, amp in psi.amplitudes.items()]
    items.sort()
    entries: Dict[Tuple[int, int], complex] = {}
    if p < 1.0:
        for a, (r, ar) in enumerate(items):
            for c, ac in items[a:]:
                val = (1.0 - p) * ar * np.conj(ac)
                if val != 0:
                    entries[(r, c)] = complex(val)
    if p > 0.0:
        noise = p / dim
        for r in range(1, dim + 1):
            entries[(r, r)] = entries.get((r, r), 0.0) + noise
    for key in [k for k in entries if k[0] == k[1]]:
        entries[key] = complex(entries[key].real, 0.0)
    return DensityMatrix(psi.n, psi.d, entries)
