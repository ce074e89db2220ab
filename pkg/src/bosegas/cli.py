"""Command-line front end.

Subcommands:
  moment            one moment value, with the per-partition breakdown when
                    the partition route is used
  asymptotic-table  moment / leading-term ratios over a list of times
  verify            self-check suites printing one PASS/FAIL line each

Exit codes: 0 success, 1 failed verification or numerical failure, 2 bad
usage, 3 requested size beyond the supported dimension limits.

All floats print with 17 significant digits; a plain decimal column is
included whenever the scaled value fits in ordinary double range
(|log scale| < 300).  Output records end with a line feed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import BosegasError, UnsupportedDimensionError
from .kernel import cauchy_determinant
from .moments import (
    MomentRequest,
    asymptotic_ratio,
    auto_cluster_plan,
    auto_nested_plan,
    cluster_integral,
    combine_results,
    default_abscissas,
    default_epsilon,
    leading_asymptotic,
    moment_nested_contours,
    optimal_theta,
)
from .partitions import Partition, enumerate_partitions
from .quadrature import QuadratureResult
from .scaled import ScaledComplex
from .spectral import SpacePoints, verify_gap

TABLE_HEADER = ("t,moment_mantissa,moment_logscale,leading_mantissa,"
                "leading_logscale,ratio,ratio_err")
_DECIMAL_LIMIT = 300.0


def _f(v: float) -> str:
    return f"{float(v):.17g}"


def _decimal(value: ScaledComplex):
    if value.is_zero:
        return 0.0
    if abs(value.log_scale) < _DECIMAL_LIMIT:
        return value.to_complex().real
    return None


def _value_record(value: ScaledComplex, result: QuadratureResult | None = None):
    rec = {
        "mantissa_re": value.mantissa.real,
        "mantissa_im": value.mantissa.imag,
        "log_scale": value.log_scale,
        "decimal": _decimal(value),
    }
    if result is not None:
        rec["tail_bound"] = result.tail_bound
        rec["step_estimate"] = result.step_estimate
    return rec


def _emit_json(inputs, results, errors, seed=None):
    doc = {
        "inputs": inputs,
        "results": results,
        "errors": errors,
        "version": __version__,
        "seed": seed,
    }
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _points_from_args(parser, args) -> SpacePoints:
    if args.x is not None:
        if args.n is not None and args.n != len(args.x):
            parser.error(f"--n {args.n} disagrees with {len(args.x)} values in --x")
        return SpacePoints.of(args.x)
    if args.n is None:
        parser.error("provide --x values or --n (for points all at the origin)")
    return SpacePoints.of((0.0,) * args.n)


# --- moment ----------------------------------------------------------------


def _cmd_moment(parser, args) -> int:
    pts = _points_from_args(parser, args)
    t = args.t
    overrides = dict(nodes=args.nodes, theta=args.theta, epsilon=args.epsilon,
                     half_width=args.half_width)
    rows: list[tuple[str, QuadratureResult]] = []
    if args.route == "partition":
        if pts.n > 4:
            raise UnsupportedDimensionError(
                f"full partition sum supports n <= 4, got n={pts.n}"
            )
        for p in enumerate_partitions(pts.n):
            plan = auto_cluster_plan(t, p, pts, **overrides)
            res = cluster_integral(MomentRequest(t, pts, plan=plan), p)
            rows.append((str(p), res))
        total = combine_results(r for _, r in rows)
    else:
        if args.theta is not None or args.epsilon is not None:
            parser.error("--theta/--epsilon apply to the partition route only")
        a = default_abscissas(pts.n, t, pts)
        plan = auto_nested_plan(t, a, nodes=args.nodes, half_width=args.half_width)
        total = moment_nested_contours(MomentRequest(t, pts, plan=plan), abscissas=a)

    inputs = {"command": "moment", "t": t, "x": list(pts.coords), "route": args.route,
              "nodes": args.nodes, "theta": args.theta, "epsilon": args.epsilon,
              "half_width": args.half_width}
    if args.format == "json":
        results = {
            "terms": [dict(partition=name, **_value_record(r.value, r)) for name, r in rows],
            "total": _value_record(total.value, total),
        }
        errors = {"tail_bound": total.tail_bound, "step_estimate": total.step_estimate}
        _emit_json(inputs, results, errors)
    else:
        out = ["term,value_mantissa,value_logscale,value_decimal,tail_bound,step_estimate"]
        for name, r in rows + [("total", total)]:
            dec = _decimal(r.value)
            out.append(",".join([
                name,
                _f(r.value.mantissa.real),
                _f(r.value.log_scale),
                "" if dec is None else _f(dec),
                _f(r.tail_bound),
                _f(r.step_estimate),
            ]))
        sys.stdout.write("\n".join(out) + "\n")
    return 0


# --- asymptotic-table -------------------------------------------------------


def _cmd_table(parser, args) -> int:
    if args.x_power is not None and args.x_power >= 1.0:
        parser.error("--x-power must be < 1 so points stay inside the diffusive window")
    n = args.n
    rows = []
    for t in args.t_list:
        if args.x_power is None:
            x = (0.0,) * n
        else:
            x = tuple(i * t ** args.x_power for i in range(n))
        r = asymptotic_ratio(MomentRequest(t, x))
        rows.append((t, r))
    inputs = {"command": "asymptotic-table", "n": n, "t_list": list(args.t_list),
              "x_power": args.x_power}
    if args.format == "json":
        results = [
            {
                "t": t,
                "moment": _value_record(r.moment.value, r.moment),
                "leading": _value_record(r.leading),
                "ratio": r.ratio,
                "ratio_err": r.error,
            }
            for t, r in rows
        ]
        _emit_json(inputs, results, {"note": "ratio_err propagates tail and step estimates"})
    else:
        out = [TABLE_HEADER]
        for t, r in rows:
            out.append(",".join([
                _f(t),
                _f(r.moment.value.mantissa.real),
                _f(r.moment.value.log_scale),
                _f(r.leading.mantissa.real),
                _f(r.leading.log_scale),
                _f(r.ratio),
                _f(r.error),
            ]))
        sys.stdout.write("\n".join(out) + "\n")
    return 0


# --- verify ----------------------------------------------------------------


def _check(name: str, ok: bool, detail: str, lines: list[str]) -> bool:
    lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return ok


def _suite_gap(lines: list[str]) -> bool:
    ok = True
    for n in range(2, 13):
        report = verify_gap(n)
        ok &= _check(f"gap n={n}", report.all_positive,
                     f"min margin {float(report.min_margin):.6g} over "
                     f"{len(report.margins)} lower states", lines)
    return ok


def _suite_routes(lines: list[str]) -> bool:
    ok = True
    for t, x in ((1.0, (0.0, 0.5)), (0.8, (0.0, 0.3, -0.5))):
        req = MomentRequest(t, x)
        a = combine_results(
            cluster_integral(req, p) for p in enumerate_partitions(len(x))
        )
        b = moment_nested_contours(req)
        rel = abs(a.value.ratio_to(b.value) - 1.0)
        ok &= _check(f"routes n={len(x)}", rel <= 1e-6,
                     f"partition vs nested rel diff {rel:.3e} (tol 1e-06)", lines)
    return ok


def separated_points(rng, count: int, min_gap: float = 0.3):
    """Random complex points in a box, rejection-sampled to pairwise >= min_gap
    (ill-conditioning of near-coincident Cauchy nodes would otherwise swamp
    the elimination route with legitimate rounding)."""
    while True:
        pts = rng.uniform(-3.0, 3.0, size=count) + 1j * rng.uniform(-3.0, 3.0, size=count)
        gaps = np.abs(pts[:, None] - pts[None, :])
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() >= min_gap:
            return pts


def _suite_determinant(lines: list[str]) -> bool:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(2024)))
    worst = 0.0
    for _ in range(200):
        ell = int(rng.integers(1, 7))
        pts = separated_points(rng, 2 * ell)
        u, v = pts[:ell], pts[ell:]
        closed = cauchy_determinant(u, v)
        direct = complex(np.linalg.det(1.0 / (u[:, None] - v[None, :])))
        worst = max(worst, abs(direct - closed) / abs(closed))
    return _check("determinant", worst <= 1e-10,
                  f"elimination vs product form, worst rel diff {worst:.3e} over 200 draws",
                  lines)


def _suite_theta(lines: list[str]) -> bool:
    ok = True
    t, x = 1.0, (0.0, 0.2, -0.4)
    for p in enumerate_partitions(3):
        base = None
        worst = 0.0
        theta0 = float(optimal_theta(p)) - sum(x) / (3 * t)
        for dtheta in (-0.3, 0.0, 0.3):
            for eps in ((0.05, 0.1) if p.length > 1 else (default_epsilon(3),)):
                plan = auto_cluster_plan(t, p, x, theta=theta0 + dtheta, epsilon=eps)
                res = cluster_integral(MomentRequest(t, x, plan=plan), p)
                if base is None:
                    base = res.value
                else:
                    worst = max(worst, abs(res.value.ratio_to(base) - 1.0))
        ok &= _check(f"theta partition={p}", worst <= 1e-8,
                     f"contour-shift invariance, worst rel diff {worst:.3e}", lines)
    return ok


def _suite_mc(lines: list[str], seed: int) -> bool:
    from .she_mc import GridSpec, estimate_moment

    grid = GridSpec(dx=0.05, dt=0.00125, half_width=3.0, t_final=0.5)
    est = estimate_moment(grid, (0.0,), replicas=2000, seed=seed)
    target = 1.0 / math.sqrt(math.pi)
    dev = abs(est.mean - target)
    ok = dev <= 3.0 * est.std_error
    return _check("mc n=1", ok,
                  f"|{est.mean:.6f} - {target:.6f}| = {dev:.2e} vs 3 s.e. = "
                  f"{3 * est.std_error:.2e} (seed {seed}, clips {est.clip_count})", lines)


def _cmd_verify(parser, args) -> int:
    if args.strict and args.seed is None and args.suite in (None, "mc"):
        parser.error("--strict verification of the mc suite needs an explicit --seed")
    suites = [args.suite] if args.suite else ["gap", "routes", "determinant", "theta", "mc"]
    lines: list[str] = []
    all_ok = True
    for name in suites:
        if name == "gap":
            all_ok &= _suite_gap(lines)
        elif name == "routes":
            all_ok &= _suite_routes(lines)
        elif name == "determinant":
            all_ok &= _suite_determinant(lines)
        elif name == "theta":
            all_ok &= _suite_theta(lines)
        elif name == "mc":
            all_ok &= _suite_mc(lines, 0 if args.seed is None else args.seed)
    lines.append(f"{'OK' if all_ok else 'FAILED'}: "
                 f"{sum(l.startswith('PASS') for l in lines)}/{len(lines)} checks passed")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if all_ok else 1


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bosegas",
        description="Exact moments of the multiplicative-noise heat equation "
                    "via contour quadrature, with independent cross-checks.",
    )
    parser.add_argument("--version", action="version", version=f"bosegas {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("moment", help="evaluate one joint moment")
    m.add_argument("--t", type=float, required=True, help="time, > 0")
    m.add_argument("--n", type=int, help="number of points (all at 0 unless --x given)")
    m.add_argument("--x", type=float, nargs="+", help="evaluation points")
    m.add_argument("--route", choices=("partition", "nested"), default="partition")
    m.add_argument("--theta", type=float, help="override contour abscissa (partition route)")
    m.add_argument("--epsilon", type=float, help="override line offset (partition route)")
    m.add_argument("--nodes", type=int, help="override nodes per line (odd)")
    m.add_argument("--half-width", type=float, help="override contour truncation")
    m.add_argument("--format", choices=("csv", "json"), default="csv")

    a = sub.add_parser("asymptotic-table", help="moment vs leading term over times")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--t-list", type=float, nargs="+", required=True)
    a.add_argument("--x-power", type=float,
                   help="spread points as x_i = i * t**p (p < 1); default all at 0")
    a.add_argument("--format", choices=("csv", "json"), default="csv")

    v = sub.add_parser("verify", help="run self-check suites")
    v.add_argument("--suite", choices=("gap", "routes", "determinant", "theta", "mc"),
                   help="run one suite (default: all)")
    v.add_argument("--seed", type=int, help="seed for the mc suite")
    v.add_argument("--strict", action="store_true",
                   help="refuse implicit defaults (mc suite then requires --seed)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "moment":
            return _cmd_moment(parser, args)
        if args.command == "asymptotic-table":
            return _cmd_table(parser, args)
        return _cmd_verify(parser, args)
    except UnsupportedDimensionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except BosegasError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
