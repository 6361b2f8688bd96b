"""Command-line front end: ``bergman-lab {threshold,verify,scan,atomic}``.

Exit codes: 0 pass, 1 computation or verdict failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import atomic, diagnostics, lattice, operators, verify


def _positive(text: str) -> float:
    val = float(text)
    if not val > 0 or not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return val


def _alpha(text: str) -> float:
    val = float(text)
    if not val > -1 or not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"alpha must exceed -1, got {text}")
    return val


def _radius(text: str) -> float:
    val = float(text)
    if not 0 <= val < 1:
        raise argparse.ArgumentTypeError(f"radius must lie in [0, 1), got {text}")
    return val


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------- threshold


def cmd_threshold(args) -> int:
    p, alpha = args.p, args.alpha
    rows = []
    if p > 1:
        if args.delta is not None:
            raise _Usage("--delta applies only when p <= 1")
        rows.append(("p > 1 boundedness", "m_threshold", diagnostics.m_threshold(p, alpha)))
    else:
        thr, beta = diagnostics.m_threshold_small_p(p, alpha, args.delta)
        rows.append(("0 < p <= 1 boundedness", "m_threshold", thr))
        rows.append(("0 < p <= 1 boundedness", "norm_weight_beta", beta))
    if p > 2:
        low, high = diagnostics.pq_window(p, alpha)
        rows.append(("p -> q window", "m_low_exclusive", low))
        rows.append(("p -> q window", "m_high_inclusive", high))
        if args.q is not None and args.m is not None:
            reg = diagnostics.pq_regime(p, args.q, args.m, alpha)
            print(f"pq_regime: {reg.classification} ({reg.reason})")
    print(f"{'result':<26}{'quantity':<20}value")
    for result, name, val in rows:
        print(f"{result:<26}{name:<20}{val:.12g}")
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    checks = verify.run_suite(args.suite)
    fh = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["check_id", "params", "observed", "expected", "pass"])
        for c in checks:
            out.writerow([c.check_id, c.params, _fmt(c.observed), _fmt(c.expected), str(c.passed).lower()])
    finally:
        if fh is not sys.stdout:
            fh.close()
    failed = [c for c in checks if not c.passed]
    print(f"{args.suite}: {len(checks) - len(failed)}/{len(checks)} checks passed", file=sys.stderr)
    return 1 if failed else 0


# ---------------------------------------------------------------- scan


def cmd_scan(args) -> int:
    S = operators.parse_operator(args.op)
    rays = diagnostics.default_rays(args.rays)
    radii = args.radii if args.radii else diagnostics.default_radii(args.levels)
    report = diagnostics.compactness_scan(S, args.p, args.alpha, args.m, rays, radii, args.jobs)
    prefix = Path(args.output)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    bad = [s for s in report.samples
           if not (math.isfinite(abs(s.berezin)) and all(math.isfinite(v) for v in s.norms.values()))]
    report.metadata["incomplete_samples"] = len(bad)
    report.write_json(prefix.with_suffix(".json"))
    report.write_csv(prefix.with_suffix(".csv"))
    v = report.verdicts
    state = "compact-consistent" if v["compact_consistent"] else "not compact-consistent"
    print(f"{S.name}: {state}; outer |berezin| {v['berezin_outer_max']:.6g}, inner {v['berezin_inner_max']:.6g}; "
          f"sup ||S_z 1||_{args.m:g} = {v['sup_norm']:.6g}, m threshold {v['m_threshold']:.6g}")
    if bad:
        print(f"warning: {len(bad)} samples did not produce finite values; output is partial", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------- atomic


def parse_function(text: str, alpha: float):
    s = 2.0 + alpha
    if text == "one":
        return operators.one
    if text == "w":
        return operators.identity_fn
    kind, _, val = text.partition(":")
    if kind in ("kernel", "normkernel") and val:
        z = complex(val)
        if not abs(z) < 1:
            raise ValueError("kernel point must lie in the unit disk")
        scale = (1 - abs(z) ** 2) ** (s / 2) if kind == "normkernel" else 1.0
        zc = np.conj(z)
        return lambda w: scale * (1 - zc * np.asarray(w, dtype=complex)) ** (-s)
    raise ValueError(f"unknown function selector {text!r}")


def cmd_atomic(args) -> int:
    if not args.p > 1:
        raise _Usage("atomic decomposition needs p > 1")
    if not 0 < args.r <= 1:
        raise _Usage("r must lie in (0, 1]")
    f = parse_function(args.f, args.alpha)
    lat = lattice.build_lattice(args.r, args.R_max)
    exp = atomic.decompose(lat, f, args.p, args.alpha, args.reg)
    prefix = Path(args.output)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    lat_path = prefix.with_suffix(".lattice")
    lattice.save_lattice(lat, lat_path)
    atomic.save_expansion(exp, prefix.with_suffix(".expansion"), lat_path)
    radii = np.linspace(0.0, args.radius, 9)
    rows = atomic.error_table(exp, f, radii)
    with open(prefix.with_suffix(".errors.csv"), "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["radius", "max_abs_error"])
        for rad, err in rows:
            out.writerow([_fmt(rad), _fmt(err)])
    err = atomic.relative_sup_error(exp, f, args.radius)
    ratio = exp.coefficient_norm() / atomic.function_norm(f, args.p, args.alpha)
    print(f"centers {lat.count}; residual {exp.residual:.3g}; relative sup error on |w| <= {args.radius:g}: "
          f"{err:.3g}; coefficient norm ratio {ratio:.6g}")
    if exp.ill_conditioned:
        print(f"ill-conditioned sampling solve: residual {exp.residual:.3g}", file=sys.stderr)
        return 1
    if not err <= args.tol:
        print(f"reconstruction error {err:.3g} exceeds {args.tol:g}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------- parser


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergman-lab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", help="test-exponent thresholds for boundedness",
                       description="Thresholds on m for the sup_z ||S_z 1||_m boundedness criterion: "
                                   "p(2+a)/(1+a) max{1, 1/(p-1)} for p > 1, the delta-family for 0 < p <= 1, "
                                   "and the m-window of the L^p -> L^q result for p > 2.")
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--alpha", type=_alpha, default=0.0)
    p.add_argument("--delta", type=_positive, default=None, help="default (1+alpha)/p")
    p.add_argument("--q", type=_positive, default=None, help="classify the p -> q regime (needs --m)")
    p.add_argument("--m", type=_positive, default=None)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("verify", help="run a module's invariant suite",
                       description="Run invariant checks and print CSV rows (check_id, params, observed, "
                                   "expected, pass).")
    p.add_argument("suite", choices=sorted(verify.SUITES))
    p.add_argument("--output", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="boundary scan of the Berezin transform",
                       description="Compactness criterion: S is compact iff its Berezin transform vanishes "
                                   "at the boundary. Scans rays x radii, also reporting ||S_z 1||_t for "
                                   "t in {1, m/2, m} and the boundedness verdict.")
    p.add_argument("--op", required=True, help="identity | zero | rank1 | toeplitz:<symbol> | "
                                                "diagonal:inv_n | diagonal:pow:<s> | diagonal:const:<c>")
    p.add_argument("--p", type=_positive, default=2.0)
    p.add_argument("--alpha", type=_alpha, default=0.0)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--rays", type=int, default=8)
    p.add_argument("--levels", type=int, default=7, help="radii 1 - 2^-j for j = 1..levels")
    p.add_argument("--radii", type=_radius, nargs="+", default=None)
    p.add_argument("--output", default="scan", help="output prefix for .json and .csv")
    p.add_argument("--jobs", type=int, default=None, help=f"worker processes (fallback ${diagnostics.JOBS_ENV})")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("atomic", help="atomic decomposition round trip",
                       description="Atomic decomposition over an r-lattice: invert the sampling operator by "
                                   "collocation, form the coefficients, reconstruct and report errors.")
    p.add_argument("--f", default="one", help="one | w | kernel:<z> | normkernel:<z>")
    p.add_argument("--p", type=_positive, default=2.0)
    p.add_argument("--alpha", type=_alpha, default=0.0)
    p.add_argument("--r", type=_positive, default=0.35)
    p.add_argument("--R-max", dest="R_max", type=_radius, default=0.95)
    p.add_argument("--reg", type=float, default=atomic.DEFAULT_REG)
    p.add_argument("--radius", type=_radius, default=0.8)
    p.add_argument("--tol", type=_positive, default=1e-2)
    p.add_argument("--output", default="atomic", help="output prefix")
    p.set_defaults(func=cmd_atomic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_Usage, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
