"""Command-line harness: ingestion, experiments, verification, reports.

Configuration is flags-only; a run is a pure function of (inputs, seed,
version).  Exit codes: 0 success, 1 verification/assertion failure,
2 malformed input.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import acceptance, io, linalg
from .algebra import ClassicalLipschitz, MatrixState, ProbState, mk_classical_report, mk_spread
from .coarse import RepresentationOverMetric, commutant_seminorm_interval, prop_interval, support_prop
from .config import DEFAULT_TOL
from .constructions import (
    ACSpace,
    ac_prop_sandwich,
    approx_unit,
    corona_maps_check,
    mk_union,
    slow_osc_score,
)
from .cutting import cut
from .exceptions import CoarseqmError, MetricValidationError, UsageError
from .metric import find_violations, grid_cover, grid_space
from .rng import hermitian_sample, stream
from .spectral import FourierProfile, evo_commutator_check, fourier_func_calc, lstar_fourier_check


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=42, help="seed for all randomized searches")
    parser.add_argument("--tol-scale", type=float, default=1.0,
                        help="multiply all relative tolerances by this factor")
    parser.add_argument("--budget", type=int, default=16, help="trial count for randomized searches")
    parser.add_argument("--out", default=None, help="write the report to this path")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def _emit(args, payload) -> None:
    text = io.emit_report(payload, args.out, args.format)
    sys.stdout.write(text)


def _parse_grid(spec: str):
    out = []
    for axis in spec.split(","):
        lo, _, hi = axis.partition(":")
        try:
            out.append((int(lo), int(hi)))
        except ValueError:
            raise UsageError(f"--grid: axis '{axis}' is not LO:HI")
    return out


def _cmd_validate(args) -> int:
    doc = io._read_json(args.space)
    dist = np.asarray(doc.get("dist", []), dtype=float)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise UsageError(f"{args.space}: field 'dist' must be a square matrix")
    violations = find_violations(dist, DEFAULT_TOL.scaled(args.tol_scale))
    payload = {
        "file": args.space,
        "points": int(dist.shape[0]),
        "valid": not violations,
        "violations": [{"kind": v.kind, "points": list(v.points), "detail": v.detail}
                       for v in violations],
    }
    _emit(args, payload)
    return 0 if not violations else 1


def _cmd_mk(args) -> int:
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    mu = io.load_state(args.mu)
    nu = io.load_state(args.nu)
    if args.spread:
        if not (isinstance(mu, tuple) and isinstance(nu, tuple)):
            raise UsageError("--spread needs density-matrix states ('density' field)")
        value = mk_spread(mu[1], nu[1], tol)
        payload = {"variant": "spread", "distance": value}
    elif args.union is not None:
        union = io.load_union(args.union)
        if not (isinstance(mu, tuple) or isinstance(nu, tuple)):
            i, j = args.mu_component, args.nu_component
            value = mk_union(union, i, mu, j, nu, tol)
        else:
            i = mu[0] if isinstance(mu, tuple) else args.mu_component
            j = nu[0] if isinstance(nu, tuple) else args.nu_component
            value = mk_union(union, i, mu[1] if isinstance(mu, tuple) else mu,
                             j, nu[1] if isinstance(nu, tuple) else nu, tol)
        payload = {"variant": "union", "distance": float(value)}
    else:
        if args.space is None:
            raise UsageError("mk: need --space (classical), --spread, or --union")
        space = io.load_metric(args.space)
        report = mk_classical_report(mu, nu, space, tol)
        payload = {"variant": "classical", "distance": report.dual,
                   "primal": report.primal, "duality_gap": report.gap}
    print(payload["distance"])
    if args.out:
        io.emit_report(payload, args.out, args.format)
    return 0


def _cmd_prop(args) -> int:
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    op = io.load_matrix(args.op)
    space = io.load_metric(args.space)
    rep = RepresentationOverMetric(space)
    report = prop_interval(op.mat, rep=rep, tol=tol)
    print(f"[{report.interval.lower:.9g}, {report.interval.upper:.9g}]")
    payload = {
        "lower": report.interval.lower,
        "upper": report.interval.upper,
        "witness_family": report.witness_family,
        "support_pairs": [list(p) for p in report.support],
        "degenerate": report.degenerate,
    }
    if args.out:
        io.emit_report(payload, args.out, args.format)
    return 0


def _cmd_lstar(args) -> int:
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    op = io.load_matrix(args.op)
    space = io.load_metric(args.space)
    rep = RepresentationOverMetric(space)
    ci = commutant_seminorm_interval(op.mat, ClassicalLipschitz(space),
                                     budget=args.budget, rng=stream(args.seed, "lstar"),
                                     rep=rep, tol=tol)
    print(f"[{ci.lower:.9g}, {ci.upper:.9g}]")
    payload = {"lower": ci.lower, "upper": ci.upper,
               "lower_witness": ci.lower_witness, "upper_provenance": ci.upper_provenance}
    if args.out:
        io.emit_report(payload, args.out, args.format)
    return 0


def _cmd_cut(args) -> int:
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    bounds = _parse_grid(args.grid)
    space = grid_space(bounds)
    rep = RepresentationOverMetric(space)
    if args.op:
        T = io.load_matrix(args.op).mat
    else:
        rng = stream(args.seed, "cut-op")
        T = rng.standard_normal((space.n, space.n)) + 1j * rng.standard_normal((space.n, space.n))
        T /= linalg.op_norm(T)
    lstar_ub = args.lstar
    if lstar_ub is None:
        lstar_ub = 3.0 * support_prop(T, rep, tol) * linalg.op_norm(T)
    radii = [float(r) for r in args.sweep.split(",")] if args.sweep else [args.radius]
    rows = []
    for radius in radii:
        cover = grid_cover(bounds, radius)
        rpt = cut(T, space, cover, radius, lstar_ub, rep=rep, tol=tol)
        rows.append({
            "radius": radius,
            "deviation": rpt.deviation,
            "nominal_bound": rpt.nominal_bound,
            "slack_factor": rpt.slack_factor,
            "measured_ratio": rpt.measured_ratio,
            "prop_upper": rpt.prop_upper,
            "prop_bound": rpt.prop_bound,
            "n_colors": rpt.n_colors,
            "diam_bound": rpt.diam_bound,
            "within_bound": rpt.within_bound,
            "prop_ok": rpt.prop_ok,
        })
    ok = all(r["within_bound"] and r["prop_ok"] for r in rows)
    _emit(args, {"lstar_ub": lstar_ub, "rows": rows} if args.format == "json" else rows)
    return 0 if ok else 1


def _cmd_union(args) -> int:
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    union = io.load_union(args.union)
    units = []
    for n in range(union.n):
        _, val = approx_unit(union, n)
        units.append({"n": n, "seminorm": float(val), "inverse_gap": 1.0 / float(union.gaps[n])})
    anchors = []
    for i in range(union.n - 1):
        d = mk_union(union, i, union.components[i].anchor,
                     i + 1, union.components[i + 1].anchor, tol)
        anchors.append({"i": i, "j": i + 1, "mk": float(d), "gap": float(union.gaps[i])})
    payload = {"components": union.n, "approx_units": units, "anchor_distances": anchors}
    _emit(args, payload)
    ok = all(abs(u["seminorm"] - u["inverse_gap"]) <= 1e-12 for u in units)
    ok = ok and all(abs(a["mk"] - a["gap"]) <= 1e-7 for a in anchors)
    return 0 if ok else 1


def _cmd_ac(args) -> int:
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    base = io.load_metric(args.space)
    space = ACSpace(base, args.fiber)
    if args.op:
        T = io.load_matrix(args.op).mat
    else:
        rng = stream(args.seed, "ac-op")
        T = rng.standard_normal((space.dim, space.dim)) \
            + 1j * rng.standard_normal((space.dim, space.dim))
    sandwich = ac_prop_sandwich(T, space, budget=args.budget,
                                rng=stream(args.seed, "ac-sw"), tol=tol)
    tau = MatrixState(np.eye(args.fiber, dtype=complex) / args.fiber)
    corona = corona_maps_check(space, tau, stream(args.seed, "ac-corona"),
                               cutoffs=tuple(range(0, base.n)), tol=tol)
    payload = {
        "block_propagation": sandwich.block_prop,
        "fiber_radius": sandwich.fiber_radius,
        "witness_lower": sandwich.witness_lower,
        "sandwich_upper_ok": sandwich.upper_ok,
        "sandwich_lower_ok": sandwich.lower_ok,
        "corona_ok": corona.all_ok,
        "corona_difference_curve": [list(row) for row in corona.difference_curve],
    }
    _emit(args, payload)
    return 0 if (sandwich.upper_ok and sandwich.lower_ok and corona.all_ok) else 1


def _cmd_spectral(args) -> int:
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    rng = stream(args.seed, "spectral")
    D = hermitian_sample(rng, args.dim)
    a = hermitian_sample(rng, args.dim)
    sweep = []
    ok = True
    for t in np.linspace(-3.0, 3.0, args.t_nodes):
        lhs, rhs = evo_commutator_check(D, a, float(t), tol)
        good = lhs <= rhs + 1e-9 * max(1.0, rhs)
        ok = ok and good
        sweep.append({"t": float(t), "lhs": lhs, "rhs": rhs, "ok": good})
    prof = FourierProfile.sinc(args.nodes)
    _, bound = fourier_func_calc(D, prof, tol)
    fr = lstar_fourier_check(D, prof, args.budget, stream(args.seed, "spectral-ls"), tol)
    ok = ok and fr.within
    payload = {
        "dim": args.dim,
        "evolution_ok": all(r["ok"] for r in sweep),
        "fourier_bound": bound,
        "fourier_max_ratio": fr.max_ratio,
        "fourier_ok": fr.within,
        "sweep": sweep,
    }
    _emit(args, payload if args.format == "json" else sweep)
    return 0 if ok else 1


_HIGSON_FUNCTIONS = {
    "sinlog": lambda x: np.sin(np.log1p(x)),
    "sin": np.sin,
    "const": lambda x: np.ones_like(x),
    "sqrt": np.sqrt,
}


def _cmd_higson(args) -> int:
    if args.function not in _HIGSON_FUNCTIONS:
        raise UsageError(f"--function '{args.function}' unknown "
                         f"(choose from {sorted(_HIGSON_FUNCTIONS)})")
    values = _HIGSON_FUNCTIONS[args.function](np.arange(args.length + 1, dtype=float))
    rows = []
    for K in (int(k) for k in args.cutoffs.split(",")):
        score = slow_osc_score(values, args.radius, K)
        rows.append({"K": K, "R": args.radius, "score": score})
    _emit(args, rows if args.format == "csv" else {"function": args.function, "rows": rows})
    return 0


def _cmd_verify(args) -> int:
    tol = DEFAULT_TOL.scaled(args.tol_scale)
    results = acceptance.run_all(args.seed, tol, printer=print)
    payload = {
        "seed": args.seed,
        "passed": all(r.passed for r in results),
        "criteria": [{"number": r.number, "name": r.name,
                      "passed": r.passed, "detail": r.detail} for r in results],
    }
    if args.out:
        io.emit_report(payload, args.out, args.format)
    return 0 if payload["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coarseqm",
        description="Desk-scale checks for operator propagation, commutator seminorms, "
                    "state-space transport distances, and cover-based cutting.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check metric axioms of a distance matrix")
    p.add_argument("--space", required=True)
    _common(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("mk", help="Monge-Kantorovich distance between two states")
    p.add_argument("--space", help="metric space JSON (classical variant)")
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--spread", action="store_true", help="matrix states under the spread seminorm")
    p.add_argument("--union", help="union-space JSON (union variant)")
    p.add_argument("--mu-component", type=int, default=0)
    p.add_argument("--nu-component", type=int, default=0)
    _common(p)
    p.set_defaults(fn=_cmd_mk)

    p = sub.add_parser("prop", help="certified propagation interval of an operator")
    p.add_argument("--op", required=True)
    p.add_argument("--space", required=True)
    _common(p)
    p.set_defaults(fn=_cmd_prop)

    p = sub.add_parser("lstar", help="certified commutant-seminorm interval")
    p.add_argument("--op", required=True)
    p.add_argument("--space", required=True)
    _common(p)
    p.set_defaults(fn=_cmd_lstar)

    p = sub.add_parser("cut", help="cover-based finite-propagation compression")
    p.add_argument("--grid", required=True, help="box as LO:HI[,LO:HI ...]")
    p.add_argument("--radius", type=float, default=10.0)
    p.add_argument("--op", help="operator JSON (default: seeded random)")
    p.add_argument("--lstar", type=float, default=None,
                   help="commutant-seminorm upper bound (default: 3 prop ||T||)")
    p.add_argument("--sweep", help="comma-separated radii; one report row each")
    _common(p)
    p.set_defaults(fn=_cmd_cut)

    p = sub.add_parser("union", help="approximate units and anchor distances of a union")
    p.add_argument("--union", required=True)
    _common(p)
    p.set_defaults(fn=_cmd_union)

    p = sub.add_parser("ac", help="almost-commutative sandwich and corona maps")
    p.add_argument("--space", required=True, help="base metric space JSON")
    p.add_argument("--fiber", type=int, default=2)
    p.add_argument("--op", help="operator JSON on base x fiber (default: seeded random)")
    _common(p)
    p.set_defaults(fn=_cmd_ac)

    p = sub.add_parser("spectral", help="evolution and Fourier-calculus checks")
    p.add_argument("--dim", type=int, default=6)
    p.add_argument("--nodes", type=int, default=2001, help="quadrature node count")
    p.add_argument("--t-nodes", type=int, default=25, help="evolution sweep size")
    _common(p)
    p.set_defaults(fn=_cmd_spectral)

    p = sub.add_parser("higson", help="slow-oscillation decay scores on a truncated ray")
    p.add_argument("--function", default="sinlog")
    p.add_argument("--radius", type=float, default=10.0)
    p.add_argument("--cutoffs", default="100,1000,10000")
    p.add_argument("--length", type=int, default=100000)
    _common(p)
    p.set_defaults(fn=_cmd_higson)

    p = sub.add_parser("verify", help="run the full acceptance suite")
    _common(p)
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MetricValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoarseqmError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
