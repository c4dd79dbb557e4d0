"""Command-line front end: build / verify / run / scan / report.

Stable contracts for scripting and CI: exit code 0 on success, 1 when a
verification or certificate check fails, 2 on usage errors (bad parameters,
unknown rule, scan cap refusal).  All file outputs keep exact ``p/q``
rationals except the plotting/experiment CSVs, which render decimals at a
configurable precision.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction

from . import activeset, deformed, extension, lowerbound, polygons, polytope
from .errors import (
    BadParameters,
    CertificateFailure,
    ExtparabError,
    InternalMismatch,
    ScanCapExceeded,
    UnknownRule,
)
from .extension import ConstructionParams

USAGE_ERROR = 2
CHECK_FAILURE = 1


def _params_from_args(args) -> ConstructionParams:
    n = args.n if args.n is not None else 4 * args.d
    return ConstructionParams(n=n, d=args.d)


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _parse_seed_spec(text: str) -> list[int]:
    """Seeds as '1,2,3' or a range '1..10' (inclusive)."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return _parse_int_list(text)


def _inject_phi_weight_fault(ext):
    weights = list(ext.phi_prime.coeffs)
    idx = next(i for i, w in enumerate(weights) if w != 0)
    weights[idx] *= Fraction(24, 25)
    broken = dataclasses.replace(
        ext, phi_prime=dataclasses.replace(ext.phi_prime, coeffs=tuple(weights))
    )
    return broken


def cmd_build(args) -> int:
    params = _params_from_args(args)
    ext = extension.build(params)
    prefix = args.out or f"q_d{params.d}_n{params.n}"
    formats = ("ine", "ext", "json") if args.format == "all" else (args.format,)
    written = []
    if "ine" in formats:
        path = f"{prefix}.ine"
        with open(path, "w") as fh:
            fh.write(polytope.hrep_to_ine(ext.poly))
        written.append(path)
    if "ext" in formats:
        path = f"{prefix}.ext"
        with open(path, "w") as fh:
            fh.write(polytope.vrep_to_ext(extension.all_vertices(ext)))
        written.append(path)
    if "json" in formats:
        path = f"{prefix}.json"
        with open(path, "w") as fh:
            json.dump(extension.sidecar_json_dict(ext), fh, indent=2)
            fh.write("\n")
        written.append(path)
    print(
        f"built d={params.d} n={params.n}: "
        f"{ext.poly.num_facets} facets, {params.vertex_count} vertices"
    )
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_verify(args) -> int:
    params = _params_from_args(args)
    ext = extension.build(params)
    if args.inject_fault == "phi-weight":
        ext = _inject_phi_weight_fault(ext)

    report = extension.verify_construction(ext)
    normal_equiv = []
    for level in ext.levels:
        normal_equiv.append(
            {
                "source_dim": level.source_dim,
                "ok": polygons.check_normally_equivalent(
                    level.fiber_start, level.fiber_end
                ),
            }
        )
    level_reports = []
    stages = [2] + [lv.source_dim + 2 for lv in ext.levels]
    for dim in stages:
        poly = extension.stage_polytope(ext, dim)
        points = [list(p) for p in extension.stage_vertices(ext, dim)]
        if args.inject_fault == "vertex" and dim == stages[-1] and points:
            points[0][0] += 1
        dp_report = deformed.dp_verify(poly, points, expected_count=params.level_m(dim))
        level_reports.append({"dim": dim, **dp_report.to_json_dict()})

    combined = {
        "construction": report.to_json_dict(),
        "normal_equivalence": normal_equiv,
        "stage_vertex_checks": level_reports,
    }
    ok = (
        report.ok
        and all(e["ok"] for e in normal_equiv)
        and all(e["ok"] for e in level_reports)
    )
    combined["ok"] = ok
    text = json.dumps(combined, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    for check in report.checks:
        print(f"{'PASS' if check.ok else 'FAIL'} {check.name}: {check.detail}")
    print(f"verify d={params.d} n={params.n}: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else CHECK_FAILURE


def cmd_run(args) -> int:
    params = _params_from_args(args)
    ext = extension.build(params)
    f = activeset.pullback_objective(ext)
    rule = activeset.make_rule(args.rule, args.seed)
    m_top = params.vertex_count
    max_iter = args.max_iter if args.max_iter is not None else 4 * m_top
    start = extension.vertex_for_t(ext, 0)
    trace = activeset.active_set_run(ext.poly, f, start, rule, max_iter=max_iter)

    instance = {
        "n": params.n,
        "d": params.d,
        "M": m_top,
        "c": str(activeset.objective_constant(m_top)),
    }
    prefix = args.out or f"run_d{params.d}_{args.rule}"
    trace_path = f"{prefix}.trace.json"
    with open(trace_path, "w") as fh:
        fh.write(
            activeset.trace_to_json(
                trace, instance=instance, t_of=activeset.make_t_labeler(ext), indent=2
            )
            + "\n"
        )
    csv_path = f"{prefix}.plot.csv"
    with open(csv_path, "w") as fh:
        fh.write("t,phi,phi_prime,f\n")
        for row in activeset.trace_plot_rows(trace, ext):
            fh.write(",".join(row) + "\n")
    print(f"wrote {trace_path}")
    print(f"wrote {csv_path}")
    print(f"visited {trace.vertices_visited} vertices in {trace.edge_moves} moves")
    if trace.terminated != "Optimal":
        print(f"terminated: {trace.terminated}")
        return CHECK_FAILURE
    return 0


def cmd_scan(args) -> int:
    cap = None if args.cap_override else lowerbound.SCAN_CAP_DEFAULT
    report = lowerbound.chord_scan(args.M, cap=cap)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report.to_json_dict(), fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
    print(f"{len(report.violations)} violations / {report.pairs_checked} pairs")
    return 0 if report.ok else CHECK_FAILURE


def cmd_report(args) -> int:
    d_list = _parse_int_list(args.d)
    rules = [r for r in args.rules.split(",") if r]
    seeds = _parse_seed_spec(args.seeds)
    for d in d_list:
        params = ConstructionParams(n=4 * d, d=d)
        ext = extension.build(params)
        f = activeset.pullback_objective(ext)
        if args.inject_fault == "objective-c":
            # Replace the tuned linear coefficient by 1: chords stop being
            # distinguishable from edges and the certificate must fail.
            linear = tuple(
                -a - b for a, b in zip(ext.phi.coeffs, ext.phi_prime.coeffs)
            )
            f = activeset.QuadraticObjective(f.quad, linear, f.constant)
        lowerbound.monotone_path_check(ext, f)
        table = lowerbound.iteration_experiment(
            4 * d, d, rules, seeds, ext=ext, f=f
        )
        if args.out:
            path = f"{args.out}_d{d}.csv"
            with open(path, "w") as fh:
                fh.write(table.to_csv())
            print(f"wrote {path}")
        for row in table.rows:
            seed = "-" if row.seed is None else row.seed
            print(
                f"d={d} rule={row.rule} seed={seed} "
                f"vertices_visited={row.vertices_visited} "
                f"edge_moves={row.edge_moves} "
                f"loop_iterations={row.loop_iterations} "
                f"wall_time_ms={row.wall_time_ms:.1f}"
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extparab",
        description="Exact deformed-product parabola towers and active-set runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct a tower and export it")
    p_build.add_argument("--d", type=int, required=True)
    p_build.add_argument("--n", type=int, default=None, help="defaults to 4d")
    p_build.add_argument("--out", default=None, help="output path prefix")
    p_build.add_argument(
        "--format", choices=["ine", "ext", "json", "all"], default="all"
    )
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="machine-check every construction claim")
    p_verify.add_argument("--d", type=int, required=True)
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--out", default=None, help="JSON report path")
    p_verify.add_argument(
        "--inject-fault",
        choices=["phi-weight", "vertex"],
        default=None,
        help=argparse.SUPPRESS,
    )
    p_verify.set_defaults(func=cmd_verify)

    p_run = sub.add_parser("run", help="run the active-set method on the instance")
    p_run.add_argument("--d", type=int, required=True)
    p_run.add_argument("--n", type=int, default=None)
    p_run.add_argument(
        "--rule", choices=["first", "last", "random", "adversarial"], default="first"
    )
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--max-iter", type=int, default=None)
    p_run.add_argument("--out", default=None, help="output path prefix")
    p_run.set_defaults(func=cmd_run)

    p_scan = sub.add_parser("scan", help="exhaustive 2D chord scan")
    p_scan.add_argument("--M", type=int, required=True)
    p_scan.add_argument(
        "--cap-override",
        action="store_true",
        help=f"allow M beyond the default cap of {lowerbound.SCAN_CAP_DEFAULT}",
    )
    p_scan.add_argument("--out", default=None, help="JSON report path")
    p_scan.set_defaults(func=cmd_scan)

    p_report = sub.add_parser(
        "report", help="path certificates and iteration counts across dimensions"
    )
    p_report.add_argument("--d", required=True, help="comma list, e.g. 4,6,8")
    p_report.add_argument("--rules", default="first,last,random")
    p_report.add_argument("--seeds", default="1..10", help="'1..10' or '1,2,3'")
    p_report.add_argument("--out", default=None, help="CSV path prefix")
    p_report.add_argument(
        "--inject-fault",
        choices=["objective-c"],
        default=None,
        help=argparse.SUPPRESS,
    )
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BadParameters, UnknownRule, ScanCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (CertificateFailure, InternalMismatch) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return CHECK_FAILURE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return CHECK_FAILURE
    except ExtparabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CHECK_FAILURE


if __name__ == "__main__":
    sys.exit(main())
