"""``rectify`` command-line front end.

Exit codes: 0 success, 1 bad input (schema, domain, unknown names),
2 no convergence or failed certification, 3 integrand not homogeneous,
4 a verified property failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from . import bc, specdoc
from .arclen import reparametrize
from .convergence import ENV_SCHEDULE_MAX, ConvergenceReport, RefinementSchedule
from .curves import length
from .errors import (
    CertificationFailed,
    DimensionMismatch,
    DomainError,
    HomogeneityError,
    NonConvergence,
    RectifyError,
    SpecError,
    UnknownExample,
)
from .frechet import discrete_frechet, sample_polyline
from .integrand import integrand_by_name, line_integral
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_HOMOGENEITY, EXIT_PROPERTY = 0, 1, 2, 3, 4


def fmt(x: Any) -> str:
    """17 significant digits for floats (round-trips doubles); others verbatim."""
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def human(x: float) -> str:
    return f"{float(x):.6g}"


def write_csv(rows: Sequence[Sequence[Any]], path: str | None, stdout) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([fmt(v) for v in row])
    if path in (None, "-"):
        stdout.write(buf.getvalue())
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


@dataclass
class RunManifest:
    """Everything needed to replay a run."""

    command: str
    inputs: dict[str, Any]
    seed: int
    tolerances: dict[str, float]
    schedule: dict[str, Any]
    outputs: dict[str, str | None] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=fmt)


def _schedule(args) -> RefinementSchedule:
    return RefinementSchedule(args.min_depth, args.max_depth)


def _schedule_info(sched: RefinementSchedule) -> dict:
    return {"min_depth": sched.min_depth, "max_depth": sched.max_depth,
            "effective_max": sched.effective_max, ENV_SCHEDULE_MAX: os.environ.get(ENV_SCHEDULE_MAX)}


def _emit_manifest(args, manifest: RunManifest) -> None:
    if args.manifest:
        with open(args.manifest, "w", encoding="utf-8") as fh:
            fh.write(manifest.to_json() + "\n")


def _say(args, out, err, text: str) -> None:
    """Summaries go to stdout unless the table already occupies it."""
    stream = err if getattr(args, "out", None) in (None, "-") else out
    stream.write(text + "\n")


# --------------------------------------------------------------- commands


def cmd_length(args, out, err) -> int:
    doc = specdoc.load(args.spec)
    curve = specdoc.to_curve(doc)
    sched = _schedule(args)
    rep = length(curve, sched, tol=args.tol, extrapolate=args.extrapolate)
    write_csv(rep.csv_rows(), args.out, out)
    if args.unit_speed_out:
        usc = reparametrize(curve, sched, tol=args.tol)
        with open(args.unit_speed_out, "w", encoding="utf-8") as fh:
            json.dump(specdoc.sampled_spec(usc), fh)
    _emit_manifest(args, RunManifest("length", {"spec": doc}, args.seed, {"tol": args.tol},
                                     _schedule_info(sched), {"csv": args.out, "unit_speed": args.unit_speed_out}))
    status = "converged" if rep.converged else "NOT converged"
    _say(args, out, err, f"length {human(rep.limit_estimate)} (error {rep.error_estimate:.3g}, {status})")
    return EXIT_OK if rep.converged else EXIT_CONVERGENCE


def cmd_frechet(args, out, err) -> int:
    da, db = specdoc.load(args.spec_a), specdoc.load(args.spec_b)
    A, B = specdoc.to_curve(da), specdoc.to_curve(db)
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions differ: {A.dim} vs {B.dim}")
    n = 2 ** min(args.depth, RefinementSchedule(1, args.depth).effective_max)
    res = discrete_frechet(sample_polyline(A, n), sample_polyline(B, n), coupling=bool(args.coupling))
    if args.coupling:
        P, Q = sample_polyline(A, n), sample_polyline(B, n)
        rows = [["i", "j", "distance"]]
        rows += [[i, j, float(np.linalg.norm(P[i] - Q[j]))] for i, j in res.coupling]
        write_csv(rows, args.coupling, out)
    _emit_manifest(args, RunManifest("frechet", {"spec_a": da, "spec_b": db}, args.seed, {},
                                     {"depth": args.depth, "samples": n + 1}, {"coupling": args.coupling}))
    out.write(f"{fmt(res.distance)}\n")
    err.write(f"discrete Frechet distance {human(res.distance)} at {n + 1} samples\n")
    return EXIT_OK


def cmd_lineint(args, out, err) -> int:
    doc = specdoc.load(args.spec)
    curve = specdoc.to_curve(doc)
    F = integrand_by_name(args.integrand)
    sched = _schedule(args)
    rep = line_integral(curve, F, sched, tol=args.tol, xi_rule=args.xi, cross_rule=args.cross, seed=args.seed)
    write_csv(rep.csv_rows(), args.out, out)
    _emit_manifest(args, RunManifest("lineint", {"spec": doc, "integrand": args.integrand, "xi": args.xi,
                                                 "cross": args.cross}, args.seed, {"tol": args.tol},
                                     _schedule_info(sched), {"csv": args.out}))
    status = "converged" if rep.converged else "NOT converged"
    _say(args, out, err, f"integral {human(rep.limit_estimate)} (error {rep.error_estimate:.3g}, {status})")
    if "cross_limit" in rep.extras:
        _say(args, out, err, f"xi={args.xi} vs xi={args.cross}: {human(rep.limit_estimate)} vs "
                             f"{human(rep.extras['cross_limit'])} (gap {rep.extras['xi_gap']:.3g})")
    return EXIT_OK if rep.converged else EXIT_CONVERGENCE


def _example_params(args) -> tuple[int, dict]:
    if args.uri:
        ident, params = bc.parse_example_uri(args.uri)
    elif args.example is not None:
        ident, params = args.example, {}
    else:
        raise UnknownExample("give --example ID or --uri bc://example/ID?...")
    if args.f is not None:
        params["f"] = args.f
    if args.m is not None:
        params["m"] = args.m
    if args.curve is not None:
        params["curve"] = args.curve
    if args.integrand is not None:
        params["integrand"] = args.integrand
    if "m" in params:
        params["m"] = int(params["m"])
    curve = params.get("curve")
    if isinstance(curve, str) and (curve == "-" or curve.endswith(".json") or os.path.exists(curve)):
        params["curve"] = specdoc.to_curve(specdoc.load(curve))
    return ident, params


def cmd_bc(args, out, err) -> int:
    ident, params = _example_params(args)
    ex = bc.example_catalog(ident, **params)
    tol = args.tol if args.tol is not None else ex.tol
    rep = bc.bc_integral(ex.space, ex.phi, ex.S, tol=tol, seed=args.seed, targets=ex.targets)
    write_csv(rep.csv_rows(), args.out, out)
    V = bc.variation(ex.space, ex.phi, ex.S, budget=args.budget, seed=args.seed, targets=ex.targets)
    qa_rows = [["target_D0", "target_D", "mesh_D0", "mesh_D", "qa1", "qa2", "qsa"]]
    D = ex.space.system(ex.targets[-1], seed=[args.seed, 1])
    for k, t0 in enumerate(ex.targets[:-2]):
        t = ex.targets[-1]
        D0 = ex.space.system(t0, seed=[args.seed, 0, k])
        r = bc.qa_deficits(ex.space, ex.phi, D0, D, ex.S)
        qa_rows.append([t0, t, r.mesh_D0, r.mesh_D, r.qa1_deficit, r.qa2_deficit, r.qsa_deficit])
    if args.qa_out:
        write_csv(qa_rows, args.qa_out, out)
    _emit_manifest(args, RunManifest("bc", {"example": ident, "params": {k: str(v) for k, v in params.items()}},
                                     args.seed, {"tol": tol}, {"targets": list(ex.targets)},
                                     {"csv": args.out, "qa": args.qa_out}))
    expected = "" if ex.expected is None else f", expected {human(ex.expected)} [{ex.provenance}]"
    _say(args, out, err, f"example {ident} ({ex.title}): integral {human(rep.limit_estimate)}{expected}")
    _say(args, out, err, f"variation lower bound {human(V)}")
    for row in qa_rows[1:]:
        _say(args, out, err, f"qa deficits at D0 mesh {human(row[2])}, D mesh {human(row[3])}: "
                             f"qa1 {row[4]:.3g}, qa2 {row[5]:.3g}")
    code = EXIT_OK if rep.converged else EXIT_CONVERGENCE
    if not rep.converged:
        err.write(f"BC-integral not converged (error {rep.error_estimate:.3g} > tol {tol:.3g})\n")
    if args.certify:
        eps = [float(e) for e in args.certify.split(",")]
        try:
            cert = bc.qa_certify(ex.space, ex.phi, eps, seed=args.seed)
        except CertificationFailed as exc:
            err.write(f"certification failed: {exc}; violating pair {exc.violation}\n")
            return EXIT_CONVERGENCE
        for row in cert.rows:
            _say(args, out, err, f"certified eps {row['eps']:g}: eta {row['eta']:g}, "
                                 f"lambdas {', '.join(f'{l:.3g}' for l in row['lambdas'])}")
    return code


def cmd_verify(args, out, err) -> int:
    results = run_suite(args.suite, args.seed)
    for r in results:
        out.write(f"{'PASS' if r.ok else 'FAIL'} {r.suite}.{r.name}: {r.detail}\n")
    payload = {"suite": args.suite, "seed": args.seed,
               "passed": all(r.ok for r in results),
               "results": [{k: v for k, v in r.to_dict().items() if k != "seconds"} for r in results]}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    failed = sum(not r.ok for r in results)
    err.write(f"{len(results) - failed}/{len(results)} properties passed\n")
    return EXIT_OK if not failed else EXIT_PROPERTY


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rectify", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, schedule=True, table=True):
        sp.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
        sp.add_argument("--manifest", help="write a JSON run manifest here")
        if schedule:
            sp.add_argument("--min-depth", type=int, default=4, help="coarsest level 2**d (default 4)")
            sp.add_argument("--max-depth", type=int, default=16,
                            help=f"finest level 2**d (default 16, capped by ${ENV_SCHEDULE_MAX})")
        if table:
            sp.add_argument("--out", help="CSV convergence table path (default stdout)")

    sp = sub.add_parser("length", help="length of a curve spec")
    sp.add_argument("spec", help="curve spec JSON path, or - for stdin")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--extrapolate", action="store_true", help="report the Richardson estimate")
    sp.add_argument("--unit-speed-out", help="write the unit-speed representation as a sampled spec")
    common(sp)
    sp.set_defaults(func=cmd_length)

    sp = sub.add_parser("frechet", help="discrete Frechet distance of two curve specs")
    sp.add_argument("spec_a")
    sp.add_argument("spec_b")
    sp.add_argument("--depth", type=int, default=10, help="sample each curve at 2**depth + 1 points")
    sp.add_argument("--coupling", help="write the optimal coupling CSV here")
    common(sp, schedule=False, table=False)
    sp.set_defaults(func=cmd_frechet)

    sp = sub.add_parser("lineint", help="line integral of a catalog integrand")
    sp.add_argument("spec")
    sp.add_argument("--integrand", required=True, help="norm, area2d, zero, normsq, coordinate:m")
    sp.add_argument("--xi", default="mid", choices=["left", "mid", "right", "random"])
    sp.add_argument("--cross", default="left", choices=["left", "mid", "right", "random"],
                    help="second tag rule for the cross-check")
    sp.add_argument("--tol", type=float, default=1e-6)
    common(sp)
    sp.set_defaults(func=cmd_lineint)

    sp = sub.add_parser("bc", help="catalog interval-function integrals and deficits")
    sp.add_argument("--example", type=int, help="catalog id 1..11")
    sp.add_argument("--uri", help="bc://example/<id>?param=value")
    sp.add_argument("--f", help="function of x (examples 9 and 10), e.g. 'x^2'")
    sp.add_argument("--m", type=int, help="dimension of the cube (example 9)")
    sp.add_argument("--curve", help="catalog curve name or curve spec path (examples 7 and 11)")
    sp.add_argument("--integrand", help="integrand name (example 11)")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--budget", type=int, default=16, help="systems sampled for the variation bound")
    sp.add_argument("--qa-out", help="write per-mesh deficits CSV here")
    sp.add_argument("--certify", help="comma-separated epsilons for qa_certify")
    common(sp, schedule=False)
    sp.set_defaults(func=cmd_bc)

    sp = sub.add_parser("verify", help="run property suites")
    sp.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    sp.add_argument("--out", help="write machine-readable JSON results here")
    common(sp, schedule=False, table=False)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out, err)
    except HomogeneityError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_HOMOGENEITY
    except (NonConvergence, CertificationFailed) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONVERGENCE
    except (SpecError, DomainError, DimensionMismatch, UnknownExample, KeyError, ValueError, RectifyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"error: {msg}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
