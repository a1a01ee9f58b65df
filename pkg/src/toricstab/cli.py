"""Command-line front end.

Exit codes: 0 success, 1 usage/parse error, 2 numerical failure
(NoConvergence / ToleranceNotMet), 3 capacity exceeded.  Results go to
stdout (or --out) as canonical JSON; diagnostics to stderr.  Every run
echoes its resolved configuration; the thread count is execution detail
and is deliberately left out so outputs are byte-identical at any
--threads value.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import catalog_io
from ._rational import frac_str
from .catalog_io import catalog, catalog_lookup, dumps_deterministic, load_pl, load_polytope
from .conical import L_beta_tau, angles_and_beta_bar, conical_k_energy
from .errors import (
    CapacityExceededError,
    NoConvergenceError,
    NotFoundError,
    ParseError,
    ToleranceNotMetError,
    ToricstabError,
    ValidationError,
)
from .functional import L_functional, futaki_F0, futaki_F1, k_energy, stability_margin
from .lattice import riemann_roch_check
from .soliton import solve_soliton


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _resolve_polytope(ref):
    if ref.startswith("catalog:"):
        return catalog_lookup(ref.split(":", 1)[1]).polytope
    return load_polytope(ref)


def _resolve_theta(arg, P):
    if arg == "auto":
        sol = solve_soliton(P)
        return sol.theta, {"mode": "auto", "residual": sol.residual, "iterations": sol.iterations}
    try:
        vec = json.loads(arg)
        theta = np.asarray(vec, dtype=float)
    except (ValueError, TypeError):
        raise ParseError(f"--theta expects 'auto' or a JSON vector, got {arg!r}")
    if theta.shape != (P.dim,):
        raise ParseError(f"--theta vector has wrong length for dim {P.dim}")
    return theta, {"mode": "explicit"}


def _emit(doc, out):
    text = dumps_deterministic(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser():
    p = _Parser(prog="toricstab", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=int(os.environ.get("TORICSTAB_THREADS", "1")))
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("polytope", help="polytope utilities")
    pcs = pc.add_subparsers(dest="subcommand", required=True)
    chk = pcs.add_parser("check", help="validate a polytope file")
    chk.add_argument("file")
    chk.add_argument("--out")

    cat = sub.add_parser("catalog", help="built-in polytopes")
    cats = cat.add_subparsers(dest="subcommand", required=True)
    cats.add_parser("list", help="print names, dims, facet counts")

    sol = sub.add_parser("soliton", help="solve the soliton vector field")
    sol.add_argument("--polytope", required=True)
    sol.add_argument("--tol", type=float, default=1e-12)
    sol.add_argument("--out")

    fut = sub.add_parser("futaki", help="L(u), F1, and optionally F0 at R")
    fut.add_argument("--polytope", required=True)
    fut.add_argument("--pl", required=True)
    fut.add_argument("--theta", default="auto")
    fut.add_argument("--R", type=float, default=None)
    fut.add_argument("--out")

    rr = sub.add_parser("rr", help="Riemann-Roch lattice sums and expansion fit")
    rr.add_argument("--polytope", required=True)
    rr.add_argument("--pl", required=True)
    rr.add_argument("--R", type=float, required=True)
    rr.add_argument("--kmin", type=int, required=True)
    rr.add_argument("--kmax", type=int, required=True)
    rr.add_argument("--kstep", type=int, default=5)
    rr.add_argument("--theta", default="auto")
    rr.add_argument("--csv", help="also write the per-k table as CSV")
    rr.add_argument("--plot", help="write a static plot of ratio_k vs 1/k")
    rr.add_argument("--out")

    con = sub.add_parser("conical", help="tau, cone angles, beta_bar, L_beta_tau")
    con.add_argument("--polytope", required=True)
    con.add_argument("--theta", default="auto")
    con.add_argument("--beta", type=float, required=True)
    con.add_argument("--pl")
    con.add_argument("--out")

    scn = sub.add_parser("scan", help="empirical stability margin over random PL functions")
    scn.add_argument("--polytope", required=True)
    scn.add_argument("--samples", type=int, required=True)
    scn.add_argument("--seed", type=int, required=True)
    scn.add_argument("--out")

    en = sub.add_parser("energy", help="reduced K-energy of the Guillemin potential")
    en.add_argument("--polytope", required=True)
    en.add_argument("--theta", default="auto")
    en.add_argument("--beta", type=float, default=None)
    en.add_argument("--tol", type=float, default=1e-7)
    en.add_argument("--out")
    return p


def _run(args):
    if args.command == "polytope" and args.subcommand == "check":
        try:
            P = load_polytope(args.file)
        except ValidationError as exc:
            print(f"invalid: {exc}", file=sys.stderr)
            return 1
        doc = {
            "config": {"command": "polytope check", "file": args.file},
            "result": {
                "valid": True,
                "dim": P.dim,
                "facets": len(P.normals),
                "vertices": [[frac_str(c) for c in v] for v in P.vertices],
                "reflexive": P.is_reflexive,
                "volume": P.volume(),
                "boundary_measure": P.boundary_measure(),
            },
        }
        _emit(doc, args.out)
        return 0

    if args.command == "catalog" and args.subcommand == "list":
        for e in catalog():
            print(f"{e.name:10s} dim={e.polytope.dim} facets={len(e.polytope.normals)}  {e.description}")
        return 0

    if args.command == "soliton":
        P = _resolve_polytope(args.polytope)
        sol = solve_soliton(P, tol=args.tol)
        doc = {
            "config": {"command": "soliton", "polytope": args.polytope, "tol": args.tol},
            "result": {
                "theta": sol.theta.tolist(),
                "residual": sol.residual,
                "iterations": sol.iterations,
                "volume_weighted": sol.weighted_volume,
            },
        }
        _emit(doc, args.out)
        return 0

    if args.command == "futaki":
        P = _resolve_polytope(args.polytope)
        u = load_pl(args.pl)
        theta, theta_info = _resolve_theta(args.theta, P)
        lval = L_functional(P, theta, u)
        doc = {
            "config": {
                "command": "futaki",
                "polytope": args.polytope,
                "pl": args.pl,
                "theta": args.theta,
                "R": args.R,
            },
            "result": {
                "theta": theta.tolist(),
                "theta_info": theta_info,
                "L": lval,
                "F1": futaki_F1(P, theta, u),
                "F0_at_R": futaki_F0(P, theta, u, args.R) if args.R is not None else None,
            },
        }
        _emit(doc, args.out)
        return 0

    if args.command == "rr":
        P = _resolve_polytope(args.polytope)
        u = load_pl(args.pl)
        theta, theta_info = _resolve_theta(args.theta, P)
        report = riemann_roch_check(
            P, theta, u, args.R, range(args.kmin, args.kmax + 1, args.kstep), threads=args.threads
        )
        if args.csv:
            catalog_io.write_report(report, args.csv, format="csv")
        if args.plot:
            _plot_rr(report, args.plot)
        doc = {
            "config": {
                "command": "rr",
                "polytope": args.polytope,
                "pl": args.pl,
                "R": args.R,
                "kmin": args.kmin,
                "kmax": args.kmax,
                "kstep": args.kstep,
                "theta": args.theta,
            },
            "result": dict(report.to_dict(), theta=theta.tolist(), theta_info=theta_info),
        }
        _emit(doc, args.out)
        return 0

    if args.command == "conical":
        P = _resolve_polytope(args.polytope)
        theta, theta_info = _resolve_theta(args.theta, P)
        data = angles_and_beta_bar(P, theta, args.beta)
        result = dict(data.to_dict(), theta_info=theta_info)
        if args.pl:
            u = load_pl(args.pl)
            result["L_beta_tau"] = L_beta_tau(P, theta, args.beta, u)
        doc = {
            "config": {
                "command": "conical",
                "polytope": args.polytope,
                "theta": args.theta,
                "beta": args.beta,
                "pl": args.pl,
            },
            "result": result,
        }
        _emit(doc, args.out)
        return 0

    if args.command == "scan":
        P = _resolve_polytope(args.polytope)
        sol = solve_soliton(P)
        scan = stability_margin(P, sol.theta, args.samples, args.seed, threads=args.threads)
        doc = {
            "config": {
                "command": "scan",
                "polytope": args.polytope,
                "samples": args.samples,
                "seed": args.seed,
            },
            "result": {
                "theta": sol.theta.tolist(),
                "min_ratio": scan.min_ratio,
                "samples_used": scan.samples_used,
                "argmin_pl": scan.argmin.to_dict(),
            },
        }
        _emit(doc, args.out)
        return 0

    if args.command == "energy":
        P = _resolve_polytope(args.polytope)
        theta, theta_info = _resolve_theta(args.theta, P)
        if args.beta is None:
            value = k_energy(P, theta, rel_tol=args.tol)
            kind = "Guillemin"
        else:
            value = conical_k_energy(P, theta, args.beta, rel_tol=args.tol)
            kind = "ConicalGuillemin"
        doc = {
            "config": {
                "command": "energy",
                "polytope": args.polytope,
                "theta": args.theta,
                "beta": args.beta,
                "tol": args.tol,
            },
            "result": {"kind": kind, "value": value, "theta": theta.tolist(), "theta_info": theta_info},
        }
        _emit(doc, args.out)
        return 0

    raise AssertionError("unhandled command")


def _plot_rr(report, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ks = np.array([r.k for r in report.records], dtype=float)
    ratios = [r.ratio for r in report.records]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(1.0 / ks, ratios, "o", label="-(S1-S2)/(k N_k)")
    xs = np.linspace(0, (1.0 / ks).max() * 1.05, 200)
    fit = report.fit
    ax.plot(xs, fit.F0_est + fit.F1_est * xs + fit.curvature * xs**2, "-", label="fit a + b/k + c/k^2")
    ax.axhline(report.F0_integral, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("1/k")
    ax.set_ylabel("ratio")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _run(args)
    except (ParseError, ValidationError, NotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NoConvergenceError, ToleranceNotMetError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except CapacityExceededError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return 3
    except ToricstabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
