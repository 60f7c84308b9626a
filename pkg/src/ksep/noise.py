"""Closed-form detection functions for white-noise mixtures and their thresholds.

``gamma`` is rhs/lhs of the qubit criterion on ``(1-p)|D_m^N><D_m^N| + p I/2^N``
and ``delta`` the same ratio for the qudit criterion on the noisy N-qudit W
state.  A value below 1 certifies non-k-separability.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from scipy.optimize import bisect

DICKE = "dicke"
QUDIT_W = "qudit_w"


def _check_dicke(n: int, m: int, k: int):
    if n < 2 or not 1 <= m <= n - 1:
        raise ValueError(f"need 1 <= m <= n-1, got n={n}, m={m}")
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}")


def _check_qudit(n: int, d: int, k: int):
    if n < 2 or d != n:
        raise ValueError(f"need d = n >= 2, got n={n}, d={d}")
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}")


def _check_p(p: float):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")


def gamma(n: int, m: int, k: int, p: float) -> float:
    """Detection function of the noisy Dicke state; ``inf`` at ``p = 1``."""
    _check_dicke(n, m, k)
    _check_p(p)
    if p == 1.0:
        return math.inf
    c = math.comb(n, m)
    pairs = (n - m) * m / 2
    penalty = (n - k) / 2
    num = (pairs * p / 2**n + penalty * ((1 - p) / c + p / 2**n)) * c
    return num / (pairs * (1 - p))


def delta(n: int, d: int, k: int, p: float) -> float:
    """Detection function of the noisy N-qudit W state; ``inf`` at ``p = 1``."""
    _check_qudit(n, d, k)
    _check_p(p)
    if p == 1.0:
        return math.inf
    odds = p / (1 - p)
    dn = float(d) ** n
    return (
        math.factorial(n) * odds / dn
        + 2 * (n - k) / (n * (n - 1))
        + 2 * (n - k) * math.factorial(n - 2) * odds / dn
    )


def noise_threshold_dicke(n: int, m: int, k: int) -> float:
    """Largest p (exclusive) for which the noisy Dicke state is still detected."""
    _check_dicke(n, m, k)
    c = math.comb(n, m)
    pairs = (n - m) * m / 2
    penalty = (n - k) / 2
    num = pairs - penalty
    if num <= 0:
        return 0.0
    den = (n - m) / 2**n * (m / 2) * c - penalty + (n - k) / 2 ** (n + 1) * c + pairs
    return num / den


def noise_threshold_qudit_w(n: int, d: int, k: int) -> float:
    """Largest p (exclusive) for which the noisy N-qudit W state is still detected."""
    _check_qudit(n, d, k)
    # exact integer arithmetic; d**n overflows float precision for n >= 16
    a = d**n * (2 * k + (n - 3) * n)
    b = (n * n + n - 2 * k) * math.factorial(n)
    if a <= 0:
        return 0.0
    return a / (a + b)


def bisect_threshold(fn, xtol: float = 1e-13) -> float:
    """Root of ``fn(p) = 1`` on [0, 1) for an increasing ``fn``; 0 if ``fn(0) >= 1``."""
    if fn(0.0) >= 1.0:
        return 0.0
    hi = 1.0 - 1e-15
    if fn(hi) < 1.0:
        return 1.0
    return bisect(lambda p: fn(p) - 1.0, 0.0, hi, xtol=xtol, maxiter=400)


def bisect_threshold_dicke(n: int, m: int, k: int) -> float:
    return bisect_threshold(lambda p: gamma(n, m, k, p))


def bisect_threshold_qudit_w(n: int, d: int, k: int) -> float:
    return bisect_threshold(lambda p: delta(n, d, k, p))


@dataclass(frozen=True)
class NoiseCurve:
    family: str
    n: int
    k: int
    samples: tuple
    m: int | None = None
    d: int = 2

    def __post_init__(self):
        ps = [p for p, _ in self.samples]
        if any(not 0.0 <= p < 1.0 for p in ps):
            raise ValueError("curve samples must have p in [0, 1)")
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise ValueError("curve samples must have strictly increasing p")

    @property
    def threshold(self) -> float:
        if self.family == DICKE:
            return noise_threshold_dicke(self.n, self.m, self.k)
        return noise_threshold_qudit_w(self.n, self.d, self.k)


def linear_grid(start: float, stop: float, num: int) -> list[float]:
    if num < 1:
        raise ValueError("grid needs at least one point")
    if num == 1:
        return [start]
    step = (stop - start) / (num - 1)
    return [start + i * step for i in range(num)]


def _resolve_ks(ks, n: int) -> list[int]:
    out = []
    for k in ks:
        k = n if k in ("n", "N") else int(k)
        if 2 <= k <= n and k not in out:
            out.append(k)
    return out


def sweep_curves(
    family: str,
    ns: Iterable[int],
    ks: Iterable,
    p_grid: Sequence[float],
    ms: Iterable[int] | None = None,
) -> list[NoiseCurve]:
    """Sample gamma or delta over ``p_grid`` for every valid parameter combination.

    ``ks`` may contain the string ``"n"`` meaning ``k = n``.  Invalid
    combinations (``m >= n``, ``k > n``) are skipped.
    """
    p_grid = list(p_grid)
    ns, ks = list(ns), list(ks)
    if not p_grid or not ns or not ks:
        raise ValueError("empty sweep grid")
    curves = []
    for n in ns:
        for k in _resolve_ks(ks, n):
            if family == DICKE:
                if ms is None:
                    raise ValueError("dicke sweeps need excitation numbers")
                for m in ms:
                    if 1 <= m <= n - 1:
                        samples = tuple((p, gamma(n, m, k, p)) for p in p_grid)
                        curves.append(NoiseCurve(DICKE, n, k, samples, m=m, d=2))
            elif family == QUDIT_W:
                if n < 2:
                    continue
                samples = tuple((p, delta(n, n, k, p)) for p in p_grid)
                curves.append(NoiseCurve(QUDIT_W, n, k, samples, d=n))
            else:
                raise ValueError(f"unknown family {family!r}")
    if not curves:
        raise ValueError("no valid parameter combination in sweep")
    return curves


def threshold_table(family: str, ns: Iterable[int], ks: Iterable, ms: Iterable[int] | None = None) -> list[dict]:
    rows = []
    for n in ns:
        for k in _resolve_ks(ks, n):
            if family == DICKE:
                for m in ms or ():
                    if 1 <= m <= n - 1:
                        rows.append(dict(family=DICKE, n=n, m=m, d=2, k=k,
                                         threshold=noise_threshold_dicke(n, m, k)))
            elif family == QUDIT_W:
                if n >= 2:
                    rows.append(dict(family=QUDIT_W, n=n, m=None, d=n, k=k,
                                     threshold=noise_threshold_qudit_w(n, n, k)))
            else:
                raise ValueError(f"unknown family {family!r}")
    if not rows:
        raise ValueError("no valid parameter combination")
    return rows


CURVE_HEADER = ["family", "n", "m", "d", "k", "p", "value", "violated"]
THRESHOLD_HEADER = ["family", "n", "m", "d", "k", "threshold"]


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def curves_to_csv(curves: Iterable[NoiseCurve]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for c in curves:
        for p, v in c.samples:
            w.writerow([fmt(x) for x in (c.family, c.n, c.m, c.d, c.k, float(p), float(v), v < 1.0)])
    return buf.getvalue()


def thresholds_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(THRESHOLD_HEADER)
    for r in rows:
        w.writerow([fmt(r[h]) for h in THRESHOLD_HEADER])
    return buf.getvalue()
