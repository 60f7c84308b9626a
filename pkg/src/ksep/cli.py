"""Command-line front end.

Examples::

    ksep criterion1 --n 4 --m 2 --k 2 --p 0.3
    ksep threshold --family wqudit --n 3 --k 2
    ksep sweep --family dicke --n 9:11 --m 2,4,6 --k 2,n --p-grid 0:0.99:100
    ksep oracle --n 5 --k 3 --m 2 --samples 1000 --seed 1
"""

from __future__ import annotations

import argparse
import json
import sys

from . import noise
from .criteria import DEFAULT_TOLERANCE, evaluate_criterion1, evaluate_criterion2
from .observables import (
    distinct_patterns,
    inventory_dicke,
    inventory_qudit,
    observable_count_dicke,
    observable_count_qudit,
)
from .oracle import soundness_check
from .partitions import count_partitions_formula, enumerate_partitions, stirling2
from .states import dicke_state, qudit_w_state, white_noise_mixture

FAMILIES = {"dicke": noise.DICKE, "wqudit": noise.QUDIT_W, "qudit_w": noise.QUDIT_W}


def _round(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def int_list(text: str) -> list:
    """Parse ``"2,4,6"``, ``"4:24"`` (inclusive) or mixtures; ``"n"`` passes through."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if part in ("n", "N"):
            out.append("n")
        elif ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def p_grid(text: str) -> list[float]:
    """``"start:stop:num"`` linear grid or a comma list of values."""
    if ":" in text:
        start, stop, num = text.split(":")
        return noise.linear_grid(float(start), float(stop), int(num))
    return [float(x) for x in text.split(",")]


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, path):
    _emit(json.dumps(_round(obj), indent=2) + "\n", path)


def _report_json(rep, params):
    return {
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "margin": rep.margin,
        "violated": rep.violated,
        "params": params,
        "tolerance": rep.tolerance,
        **({"note": rep.note} if rep.note else {}),
    }


def cmd_criterion1(args):
    rho = white_noise_mixture(dicke_state(args.n, args.m), args.p)
    rep = evaluate_criterion1(rho, args.n, args.m, args.k, args.tolerance)
    params = {"criterion": "dicke", "n": args.n, "m": args.m, "k": args.k, "p": args.p}
    _emit_json(_report_json(rep, params), args.output)
    return 0


def cmd_criterion2(args):
    rho = white_noise_mixture(qudit_w_state(args.n), args.p)
    rep = evaluate_criterion2(rho, args.n, args.k, args.tolerance)
    params = {"criterion": "qudit_w", "n": args.n, "d": args.n, "k": args.k, "p": args.p}
    _emit_json(_report_json(rep, params), args.output)
    return 0


def cmd_threshold(args):
    family = FAMILIES[args.family]
    out = {"family": family, "n": args.n, "k": args.k}
    if family == noise.DICKE:
        if args.m is None:
            raise ValueError("--m is required for the dicke family")
        out.update(m=args.m, d=2)
        if args.m in (0, args.n) and 2 <= args.k <= args.n:
            out.update(threshold=0.0, note=f"m={args.m} admits no off-diagonal pairs; criterion never detects")
        else:
            out.update(threshold=noise.noise_threshold_dicke(args.n, args.m, args.k),
                       bisection=noise.bisect_threshold_dicke(args.n, args.m, args.k))
    else:
        out.update(d=args.n, threshold=noise.noise_threshold_qudit_w(args.n, args.n, args.k),
                   bisection=noise.bisect_threshold_qudit_w(args.n, args.n, args.k))
    _emit_json(out, args.output)
    return 0


def cmd_sweep(args):
    family = FAMILIES[args.family]
    ns = [n for n in int_list(args.n) if n != "n"]
    ks = int_list(args.k)
    ms = [m for m in int_list(args.m) if m != "n"] if args.m else None
    if args.thresholds:
        text = noise.thresholds_to_csv(noise.threshold_table(family, ns, ks, ms))
    else:
        text = noise.curves_to_csv(noise.sweep_curves(family, ns, ks, p_grid(args.p_grid), ms))
    _emit(text, args.output)
    return 0


def cmd_oracle(args):
    ms = int_list(args.m) if args.m else None
    summary = soundness_check(args.n, args.k, args.d, args.samples, args.seed, ms,
                              args.max_terms, args.tolerance)
    _emit_json(summary, args.output)
    if not summary["passed"]:
        print(f"soundness breach: {summary['violations']} violating evaluations", file=sys.stderr)
        return 1
    return 0


def cmd_partitions(args):
    out = {
        "n": args.n,
        "k": args.k,
        "formula": count_partitions_formula(args.n, args.k),
        "stirling2": stirling2(args.n, args.k),
    }
    if args.list:
        parts = enumerate_partitions(args.n, args.k)
        out["enumerated"] = len(parts)
        out["partitions"] = [str(p) for p in parts]
    _emit_json(out, args.output)
    return 0


def cmd_observables(args):
    family = FAMILIES[args.family]
    if family == noise.DICKE:
        if args.m is None:
            raise ValueError("--m is required for the dicke family")
        sets = inventory_dicke(args.n, args.m)
        formula = observable_count_dicke(args.n, args.m)
    else:
        sets = inventory_qudit(args.n)
        formula = observable_count_qudit(args.n, args.n)
    if args.count:
        _emit_json({"distinct_patterns": len(distinct_patterns(sets)), "formula": formula}, args.output)
        return 0
    rows = [
        {"target": list(s.target), "part": s.part, **t.to_json()}
        for s in sets
        for t in s.terms
    ]
    _emit_json(rows, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ksep", description="Non-k-separability criteria for Dicke and qudit W states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", help="write to file instead of stdout")
        return p

    p = common(sub.add_parser("criterion1", help="qubit criterion on a noisy Dicke state"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_criterion1)

    p = common(sub.add_parser("criterion2", help="qudit criterion on a noisy N-qudit W state"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_criterion2)

    p = common(sub.add_parser("threshold", help="white-noise tolerance"))
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_threshold)

    p = common(sub.add_parser("sweep", help="CSV curves or threshold tables"))
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--n", required=True, help="e.g. 9,10,11 or 4:24")
    p.add_argument("--m", help="excitations, e.g. 2,4,6 (dicke only)")
    p.add_argument("--k", required=True, help="e.g. 2,n")
    p.add_argument("--p-grid", default="0:0.99:100", help="start:stop:num or comma list")
    p.add_argument("--thresholds", action="store_true", help="emit the threshold table instead of curves")
    p.set_defaults(func=cmd_sweep)

    p = common(sub.add_parser("oracle", help="random k-separable states must pass the criterion"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", help="excitation numbers (qubits); default all")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-terms", type=int, default=3)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_oracle)

    p = common(sub.add_parser("partitions", help="count k-block partitions"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_partitions)

    p = common(sub.add_parser("observables", help="local observable inventory as JSON"))
    p.add_argument("--family", choices=sorted(FAMILIES), default="dicke")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--count", action="store_true", help="only report distinct pattern count vs formula")
    p.set_defaults(func=cmd_observables)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
