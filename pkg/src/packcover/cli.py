"""Command-line entry point: every operation as a subcommand with JSON I/O,
explicit seeds and budgets, and a reproducibility manifest per run."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .bounds import chain_report, named_gamma
from .dispersion import max_min_separation
from .lattices import Lattice, gamma_star_of_lattice, optimize_lattice
from .moduli import EvalBudget, delta, delta_local, phi_p, t_x, tangential
from .spaces import Space, eval_norm, space_from_json
from .subgroup import FreshCoordinateOracle, SubgroupResult, build, gamma_star_upper_from_build, verify
from .suptiling import SimpleFunction, round_even, round_even_zero_dim

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_ACCEPTANCE = 4


def _digest(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


def _digest_file(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_space(path: str) -> Space:
    return space_from_json(_load_json(path))


def _emit(doc, args, manifest: dict) -> None:
    payload = json.dumps(doc, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
        manifest["outputs"] = {args.out: _digest(payload + "\n")}
        with open(args.out + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        print(payload)


def _manifest(args, inputs: list[str]) -> dict:
    return {
        "argv": sys.argv[1:],
        "seed": getattr(args, "seed", None),
        "budget": getattr(args, "budget", None),
        "version": __version__,
        "inputs": {p: _digest_file(p) for p in inputs},
        "started": time.time(),
    }


def _finish(manifest: dict) -> None:
    manifest["wall_time"] = time.time() - manifest.pop("started")


def _interval_doc(iv) -> dict:
    return iv.to_json()


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_norm(args) -> int:
    space = _load_space(args.space)
    man = _manifest(args, [args.space])
    x = np.asarray([float(v) for v in args.point.split(",")])
    doc = {"norm": eval_norm(space, x)}
    _finish(man)
    _emit(doc, args, man)
    return EXIT_OK


def _cmd_modulus(args) -> int:
    space = _load_space(args.space)
    man = _manifest(args, [args.space])
    bud = EvalBudget(args.budget)
    if args.op == "delta":
        iv = delta(space, args.eps, budget=bud, seed=args.seed)
    elif args.op == "delta-local":
        x0 = np.asarray([float(v) for v in args.x0.split(",")])
        iv = delta_local(space, x0, args.eps, budget=bud, seed=args.seed)
    elif args.op == "tangential":
        iv = tangential(space, args.t, budget=bud, seed=args.seed)
    elif args.op == "t-x":
        iv = t_x(space, budget=bud, seed=args.seed)
    else:  # phi-p
        doc = {"phi_p": phi_p(args.p, args.t)}
        _finish(man)
        _emit(doc, args, man)
        return EXIT_OK
    _finish(man)
    _emit({args.op: _interval_doc(iv)}, args, man)
    return EXIT_OK


def _cmd_dispersion(args) -> int:
    space = _load_space(args.space)
    man = _manifest(args, [args.space])
    res = max_min_separation(space, args.m, budget=args.budget, seed=args.seed)
    _finish(man)
    _emit(res.to_json(), args, man)
    return EXIT_OK


def _cmd_gamma_star(args) -> int:
    space = _load_space(args.space)
    lat = Lattice.from_json(_load_json(args.lattice))
    man = _manifest(args, [args.space, args.lattice])
    est = gamma_star_of_lattice(space, lat, mesh=args.mesh, tol=args.tol)
    _finish(man)
    _emit(est.to_json(), args, man)
    return EXIT_OK


def _cmd_optimize(args) -> int:
    space = _load_space(args.space)
    man = _manifest(args, [args.space])
    est = optimize_lattice(space, space.dim, budget=args.budget, seed=args.seed, n_seeds=args.seeds)
    _finish(man)
    _emit(est.to_json(), args, man)
    return EXIT_OK


def _cmd_subgroup(args) -> int:
    if args.action == "build":
        space = _load_space(args.space)
        targets = np.asarray(_load_json(args.targets), dtype=float)
        man = _manifest(args, [args.space, args.targets])
        oracle = FreshCoordinateOracle(args.ambient or space.dim)
        res = build(space, targets, oracle, theta=args.theta, eps=args.eps)
        _finish(man)
        _emit(res.to_json(), args, man)
        return EXIT_OK
    res = SubgroupResult.from_json(_load_json(args.result))
    man = _manifest(args, [args.result])
    cert = verify(res.space, res, radius=args.radius)
    doc = {"certificate": cert.to_json(), "gamma_star_upper": gamma_star_upper_from_build(res)}
    _finish(man)
    _emit(doc, args, man)
    return EXIT_OK


def _cmd_tile(args) -> int:
    f = SimpleFunction.from_json(_load_json(args.input))
    man = _manifest(args, [args.input])
    if args.osc > 0:
        g, bound = round_even_zero_dim(f, args.osc)
        doc = {"rounded": g.to_json(), "bound": bound}
    else:
        g = round_even(f)
        doc = {"rounded": g.to_json(), "bound": 1.0}
    _finish(man)
    _emit(doc, args, man)
    return EXIT_OK


def _cmd_report(args) -> int:
    if args.kind == "chain":
        space = _load_space(args.space)
        man = _manifest(args, [args.space])
        rep = chain_report(space, p_outer=args.p_outer, budget=EvalBudget(args.budget), seed=args.seed)
    elif args.kind == "named":
        man = _manifest(args, [])
        rep = named_gamma(args.family, p=args.p, r=args.r)
    else:  # gamma2
        man = _manifest(args, [])
        ms = [int(v) for v in args.ms.split(",")]
        rep = named_gamma("gamma2", ms=ms)
    _finish(man)
    if args.format == "table":
        print(rep.to_table())
        if getattr(args, "out", None):
            _emit(rep.to_json(), args, man)
    else:
        _emit(rep.to_json(), args, man)
    return EXIT_OK


def _cmd_suite(args) -> int:
    from .acceptance import run_suite

    results = run_suite(quick=args.quick, verbose=True)
    failed = [r for r in results if not r.passed]
    return EXIT_ACCEPTANCE if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="packcover", description="packing-and-covering constants laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, space=True):
        if space:
            p.add_argument("--space", required=True, help="space descriptor JSON file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=200_000)
        p.add_argument("--out", default=None, help="output JSON path (manifest written alongside)")
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("norm", help="evaluate the norm of a point")
    common(p)
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("modulus", help="convexity moduli")
    common(p)
    p.add_argument("--op", choices=("delta", "delta-local", "tangential", "t-x", "phi-p"), required=True)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--x0", default=None)
    p.set_defaults(func=_cmd_modulus)

    p = sub.add_parser("dispersion", help="max-min separation of m points in the unit ball")
    common(p)
    p.add_argument("-m", type=int, required=True)
    p.set_defaults(func=_cmd_dispersion)

    p = sub.add_parser("gamma-star", help="certified gamma* of a lattice")
    common(p)
    p.add_argument("--lattice", required=True)
    p.add_argument("--mesh", type=float, default=1.0 / 32)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=_cmd_gamma_star)

    p = sub.add_parser("optimize", help="search for a lattice with small gamma*")
    common(p)
    p.add_argument("--seeds", type=int, default=8, help="annealing chains")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("subgroup", help="greedy subgroup construction")
    psub = p.add_subparsers(dest="action", required=True)
    pb = psub.add_parser("build")
    common(pb)
    pb.add_argument("--targets", required=True, help="JSON list of target points")
    pb.add_argument("--theta", type=float, required=True)
    pb.add_argument("--eps", type=float, default=0.05)
    pb.add_argument("--ambient", type=int, default=None, help="fresh-coordinate budget")
    pb.set_defaults(func=_cmd_subgroup)
    pv = psub.add_parser("verify")
    common(pv, space=False)
    pv.add_argument("--result", required=True)
    pv.add_argument("--radius", type=float, required=True)
    pv.set_defaults(func=_cmd_subgroup)

    p = sub.add_parser("tile", help="even-integer rounding of simple functions")
    psub = p.add_subparsers(dest="action", required=True)
    pr = psub.add_parser("round")
    common(pr, space=False)
    pr.add_argument("--input", required=True)
    pr.add_argument("--osc", type=float, default=0.0)
    pr.set_defaults(func=_cmd_tile)

    p = sub.add_parser("report", help="bound chains and exact-value tables")
    psub = p.add_subparsers(dest="kind", required=True)
    pc = psub.add_parser("chain")
    common(pc)
    pc.add_argument("--p-outer", type=float, default=2.0)
    pc.set_defaults(func=_cmd_report)
    pn = psub.add_parser("named")
    common(pn, space=False)
    pn.add_argument("--family", required=True)
    pn.add_argument("--p", type=float, default=2.0)
    pn.add_argument("--r", type=float, default=1.0)
    pn.set_defaults(func=_cmd_report)
    pg = psub.add_parser("gamma2")
    common(pg, space=False)
    pg.add_argument("--ms", required=True, help="comma-separated ladder stages")
    pg.set_defaults(func=_cmd_report)

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--quick", action="store_true", help="fast subset only")
    p.set_defaults(func=_cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
