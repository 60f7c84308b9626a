"""Falsification harness: random k-separable states must never violate the criteria."""

from __future__ import annotations

import numpy as np

from .criteria import DEFAULT_TOLERANCE, evaluate_criterion1, evaluate_criterion2
from .partitions import random_k_separable_state


def soundness_check(
    n: int,
    k: int,
    d: int = 2,
    samples: int = 1000,
    seed: int = 0,
    ms=None,
    max_terms: int = 3,
    tolerance: float = DEFAULT_TOLERANCE,
) -> dict:
    """Sample k-separable states and evaluate the matching criterion on each.

    Qubit states (``d = 2``) are tested against the Dicke criterion for every
    excitation number in ``ms`` (default ``1..n-1``); qudit states need
    ``d = n`` and are tested against the W criterion.  Sample ``i`` mixes
    ``1 + i % max_terms`` pure states and uses the ``i``-th spawned seed.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}")
    if d == 2:
        ms = list(range(1, n)) if ms is None else list(ms)
        if not ms or any(not 1 <= m <= n - 1 for m in ms):
            raise ValueError(f"excitation numbers must lie in 1..{n - 1}")
    elif d != n:
        raise ValueError("qudit oracle needs d = n")
    children = np.random.SeedSequence(seed).spawn(samples)
    max_margin = -np.inf
    violations = []
    for i, child in enumerate(children):
        rho = random_k_separable_state(n, k, d, terms=1 + i % max_terms, seed=child)
        reports = (
            [evaluate_criterion1(rho, n, m, k, tolerance) for m in ms]
            if d == 2
            else [evaluate_criterion2(rho, n, k, tolerance)]
        )
        for rep in reports:
            max_margin = max(max_margin, rep.margin)
            if rep.violated:
                violations.append({"sample": i, "m": rep.m, "margin": rep.margin})
    return {
        "criterion": "dicke" if d == 2 else "qudit_w",
        "n": n,
        "k": k,
        "d": d,
        "m": ms if d == 2 else None,
        "samples": samples,
        "seed": seed,
        "tolerance": tolerance,
        "max_margin": float(max_margin),
        "violations": len(violations),
        "first_violations": violations[:5],
        "passed": not violations,
    }
