"""Set partitions of subsystems and random k-separable states."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Tuple

import numpy as np

from .states import DensityMatrix


@dataclass(frozen=True)
class Partition:
    """Blocks of 1-based subsystem labels, each block sorted, blocks ordered by smallest member."""

    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks) -> "Partition":
        canon = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
        if any(len(b) == 0 for b in canon):
            raise ValueError("empty block")
        return cls(tuple(canon))

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __str__(self):
        return "|".join("".join(chr(ord("A") + i - 1) if i <= 26 else f"[{i}]" for i in b) for b in self.blocks)


def _check_nk(n: int, k: int):
    if n < 1 or not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")


def _restricted_growth(n: int, k: int) -> Iterator[list[int]]:
    # block assignment a[i] with a[0] = 0 and a[i] <= max(a[:i]) + 1
    a = [0] * n

    def rec(i: int, used: int):
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                yield list(a)
            return
        for b in range(min(used + 1, k)):
            a[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(1, 1) if n > 0 else iter(())


def enumerate_partitions(n: int, k: int) -> list[Partition]:
    """Every partition of ``{1..n}`` into exactly ``k`` non-empty blocks, once each."""
    _check_nk(n, k)
    if n > 20:
        raise ValueError("refusing to enumerate partitions for n > 20")
    out = []
    for a in _restricted_growth(n, k):
        blocks = [[] for _ in range(k)]
        for i, b in enumerate(a):
            blocks[b].append(i + 1)
        out.append(Partition(tuple(tuple(b) for b in blocks)))
    return out


def _integer_partitions(n: int, k: int, largest: int | None = None) -> Iterator[Tuple[int, ...]]:
    """Non-increasing tuples of ``k`` positive parts summing to ``n``."""
    if largest is None:
        largest = n
    if k == 0:
        if n == 0:
            yield ()
        return
    for first in range(min(n - (k - 1), largest), 0, -1):
        if first * k < n:
            break
        for rest in _integer_partitions(n - first, k - 1, first):
            yield (first,) + rest


def count_partitions_formula(n: int, k: int) -> int:
    """Count k-block partitions from block-size patterns.

    For each multiset of block sizes ``m_1 + ... + m_k = n`` the number of
    labelled arrangements is ``n! / prod(m_i!)``; blocks of equal size are
    interchangeable, so divide by ``c!`` for every size occurring ``c`` times.
    """
    _check_nk(n, k)
    total = 0
    for sizes in _integer_partitions(n, k):
        term = math.factorial(n)
        for m in sizes:
            term //= math.factorial(m)
        for c in Counter(sizes).values():
            term //= math.factorial(c)
        total += term
    return total


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bell_number(n: int) -> int:
    return sum(stirling2(n, k) for k in range(n + 1))


def random_partition(n: int, k: int, rng: np.random.Generator) -> Partition:
    """A random k-block partition; every partition has non-zero probability."""
    _check_nk(n, k)
    order = rng.permutation(n)
    assign = np.empty(n, dtype=int)
    assign[order[:k]] = np.arange(k)
    assign[order[k:]] = rng.integers(0, k, size=n - k)
    blocks = [[i + 1 for i in range(n) if assign[i] == b] for b in range(k)]
    return Partition.from_blocks(blocks)


def random_block_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def product_state_vector(partition: Partition, d: int, rng: np.random.Generator) -> np.ndarray:
    """Tensor product of random block states, returned in natural subsystem order."""
    n = partition.n
    psi = np.ones(1, dtype=complex)
    order = []
    for block in partition.blocks:
        psi = np.kron(psi, random_block_state(d ** len(block), rng))
        order.extend(block)
    # axes currently follow `order`; move subsystem j to axis j-1
    tensor = psi.reshape((d,) * n)
    tensor = np.transpose(tensor, np.argsort(order))
    return tensor.reshape(-1)


def random_k_separable_state(n: int, k: int, d: int = 2, terms: int = 1, seed=None) -> DensityMatrix:
    """Convex mixture of ``terms`` pure k-separable states, each on its own random partition."""
    _check_nk(n, k)
    if d < 2:
        raise ValueError("local dimension must be >= 2")
    if terms < 1:
        raise ValueError("need at least one mixture term")
    rng = np.random.default_rng(seed)
    weights = rng.uniform(size=terms)
    weights /= weights.sum()
    dim = d**n
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        psi = product_state_vector(random_partition(n, k, rng), d, rng)
        rho += w * np.outer(psi, psi.conj())
    rho /= np.trace(rho).real
    return DensityMatrix.from_dense(rho, n, d)
