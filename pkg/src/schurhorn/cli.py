"""Command-line interface: generate graphs, plant instances, solve, certify,
report invariants, run sweeps, and export SDPA files."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import certificate, harness, invariants, orbitope, solver, spectral
from .graphs import FAMILIES, load_graph, save_graph


def _family_graph(family: str, params: list[str]):
    gen = FAMILIES[family]
    return gen(*[int(x) for x in params])


def cmd_generate(args) -> int:
    g = _family_graph(args.family, args.params)
    save_graph(g, args.out)
    print(f"wrote {args.family} graph: n={g.n} m={g.m} -> {args.out}")
    return 0


def cmd_plant(args) -> int:
    planted = load_graph(args.planted)
    instance = harness.plant(planted, args.n, args.p, args.seed)
    harness.save_instance(instance, args.out)
    print(f"planted k={planted.n} inside n={args.n} (p={args.p}, "
          f"seed={args.seed}) -> {args.out}")
    return 0


def _solve_params(args, gamma: float) -> solver.SolveParams:
    return solver.SolveParams(rho=args.rho, max_iter=args.max_iter,
                              eps_abs=args.eps_abs, eps_rel=args.eps_rel,
                              gamma=gamma)


def cmd_solve(args) -> int:
    instance = harness.load_instance(args.instance)
    if args.gamma is not None:
        gamma = args.gamma
    else:
        gamma = harness.gamma_policy(instance.planted)
    report = solver.solve(instance, _solve_params(args, gamma))
    success = solver.check_recovery(report, instance, args.tol_rec)
    payload = {
        "gamma": gamma,
        "objective": report.objective,
        "iterations": report.iterations,
        "primal_res": report.primal_res,
        "dual_res": report.dual_res,
        "status": report.status,
        "wall_time_s": report.wall_time,
        "recovered": bool(success),
    }
    with open(args.report, "w") as fh:
        json.dump(payload, fh, indent=2)
    print(f"status={report.status} recovered={success} -> {args.report}")
    return 0


def cmd_certify(args) -> int:
    instance = harness.load_instance(args.instance)
    e = certificate.eigenspace_of(instance.planted, args.eigenvalue)
    try:
        cert = certificate.build_certificate(instance, e)
        result = certificate.verify_certificate(cert, instance, e.lambda_e,
                                                margin=args.margin)
    except invariants.SingularMinorError as exc:
        result = {"overall": False, "construction_failed": str(exc)}
    bounds = certificate.theorem_bounds(
        instance.planted, e, instance.observed.n, instance.p,
        ell=args.ell or invariants.default_ell(e, instance.p),
        c2=args.c2)
    payload = {"certificate": result, "bounds": bounds.to_dict()}
    with open(args.report, "w") as fh:
        json.dump(payload, fh, indent=2)
    print(f"certificate overall={result['overall']} -> {args.report}")
    return 0 if result["overall"] else 1


def cmd_invariants(args) -> int:
    g = load_graph(args.graph)
    e = certificate.eigenspace_of(g, args.eigenvalue)
    dec = spectral.eig_sym(g.adjacency())
    idx = int(np.argmin(np.abs(dec.distinct_values - e.lambda_e)))
    gap = spectral.eigengap(dec, idx)
    ell = args.ell or invariants.default_ell(e, args.p)
    mode = "montecarlo" if args.mc_samples else "exact"
    report = invariants.invariants_report(
        e, gap, ell, args.p, mode=mode,
        samples=args.mc_samples or 10_000, seed=args.seed,
        krank_cap=args.krank_cap)
    print(json.dumps(report, indent=2))
    return 0


def cmd_sweep(args) -> int:
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(args.config, "rb") as fh:
        config = harness.sweep_config_from_dict(tomllib.load(fh))
    rows = harness.run_sweep(config, args.out)
    successes = sum(r["success"] for r in rows)
    print(f"{len(rows)} trials, {successes} recoveries -> {args.out}")
    return 0


def cmd_export_sdpa(args) -> int:
    instance = harness.load_instance(args.instance)
    orbitope.export_sdpa(instance, args.gamma, args.out)
    print(f"wrote SDPA sparse file -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schurhorn",
        description="Planted subgraph recovery via the Schur-Horn orbitope "
                    "relaxation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a named graph family")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("params", nargs="*",
                   help="family parameters (e.g. k for clique, m l for kneser)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("plant", help="plant a graph inside an Erdos-Renyi host")
    p.add_argument("--planted", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plant)

    p = sub.add_parser("solve", help="solve the relaxation on an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--gamma", type=float, default=None,
                   help="spectrum shift; default: eigenvalue of largest "
                        "multiplicity")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=20_000)
    p.add_argument("--eps-abs", type=float, default=1e-7)
    p.add_argument("--eps-rel", type=float, default=1e-6)
    p.add_argument("--tol-rec", type=float, default=1e-3)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", help="build and verify a dual certificate")
    p.add_argument("--instance", required=True)
    p.add_argument("--eigenvalue", type=float, required=True)
    p.add_argument("--margin", type=float, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--c2", type=float, default=1.0)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("invariants", help="eigenspace invariant report")
    p.add_argument("--graph", required=True)
    p.add_argument("--eigenvalue", type=float, required=True)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--mc-samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--krank-cap", type=int, default=None)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("sweep", help="run a phase-transition sweep from TOML")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export-sdpa", help="export the lifted SDP (.dat-s)")
    p.add_argument("--instance", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_sdpa)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
