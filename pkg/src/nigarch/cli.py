"""Command-line driver.

Exit codes (stable contract):
    0  success / all statistical tests passed
    1  a statistical test failed (report still written in full)
    2  usage or validation error
    3  overflow (or pre-flagged overflow risk without --force)
    4  input file / parse error
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import asymptotics, estimation, montecarlo, schemes
from .asymptotics import TheoremId, TimeGrid
from .errors import (DataError, ExplosionError, GeometricOverflowError, OverflowRiskError,
                     ParameterError, SchemeError)
from .garch import GarchParams, default_sigma0_sq, simulate
from .innovations import parse_innovation
from .schemes import Scheme

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_USAGE = 2
EXIT_OVERFLOW = 3
EXIT_IO = 4


def _write_text(path, text):
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _emit_json(path, payload):
    _write_text(path, json.dumps(payload, indent=2) + "\n")


def read_json_output(path) -> dict:
    """Load and minimally validate a JSON document this CLI produced."""
    with open(path) as handle:
        payload = json.load(handle)
    if not isinstance(payload, dict) or "kind" not in payload:
        raise DataError(f"{path} is not a nigarch JSON report (missing 'kind')")
    return payload


def _parse_grid(text: str) -> TimeGrid:
    try:
        return TimeGrid(tuple(float(v) for v in text.split(",")))
    except ValueError as exc:
        raise ParameterError(f"bad time grid {text!r}") from exc


def _build_scheme(args) -> Scheme:
    return Scheme(sign=args.sign, a=args.a, q=args.q, omega=args.omega,
                  innovation=parse_innovation(args.innovation))


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("NIGARCH_THREADS")
    return int(env) if env else 1


def cmd_simulate(args) -> int:
    params = GarchParams(omega=args.omega, alpha=args.alpha, beta=args.beta)
    innovation = parse_innovation(args.innovation)
    sigma0_sq = args.sigma0_sq if args.sigma0_sq is not None else default_sigma0_sq(params, args.n)
    path = simulate(params, innovation, args.n, sigma0_sq, args.seed)
    lines = ["k,sigma_sq,y,eps"]
    for k in range(path.n + 1):
        lines.append(f"{k},{float(path.sigma_sq[k])!r},{float(path.y[k])!r},"
                     f"{float(path.eps[k])!r}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    theorem = TheoremId(args.theorem.upper())
    scheme = _build_scheme(args)
    grid = _parse_grid(args.t)
    config = montecarlo.ExperimentConfig(
        theorem=theorem, scheme=scheme, n=args.n, grid=grid,
        replications=args.reps, master_seed=args.seed,
        sigma0_sq=args.sigma0_sq if args.sigma0_sq is not None else args.omega)
    report = montecarlo.run_experiment(config, workers=_threads(args), force=args.force)
    payload = {"kind": "verify", **report.to_dict(include_samples=args.include_samples)}
    if args.json:
        _emit_json(args.json, payload)
    if not args.quiet:
        for test in report.tests:
            status = "pass" if test["passed"] else "FAIL"
            print(f"{status}  {test['name']}: statistic={test['statistic']:.6g} "
                  f"threshold={test['threshold']:.6g}")
        print(f"{'pass' if report.passed else 'FAIL'}  overall ({theorem.value})")
    return EXIT_OK if report.passed else EXIT_STAT_FAIL


def cmd_scheme_check(args) -> int:
    scheme = _build_scheme(args)
    theorem = TheoremId(args.theorem.upper())
    report = schemes.validate_assumptions(scheme, args.n, theorem.value)
    if args.json:
        _emit_json(args.json, {"kind": "scheme-check", **report.to_dict()})
    if not args.quiet:
        print(f"regime {theorem.value} at n={args.n}: sign_compatible={report.sign_compatible} "
              f"overflow_risk={report.overflow_risk}")
        for row in report.rows:
            print(f"  ({row.assumption}) {row.statement}: {row.status}, {row.verdict}, "
                  f"witness={row.witness:.6g}")
    return EXIT_OK


def cmd_lemma41(args) -> int:
    exact = asymptotics.weighted_geometric_sum(args.nu, args.gamma, args.k)
    asymptote = asymptotics.gamma_asymptote(args.nu, args.gamma)
    ratio = exact / asymptote
    if args.json:
        _emit_json(args.json, {"kind": "lemma41", "nu": args.nu, "gamma": args.gamma,
                               "k": args.k, "exact": exact, "asymptote": asymptote,
                               "ratio": ratio})
    if not args.quiet:
        print(f"exact={exact!r} asymptote={asymptote!r} ratio={ratio!r}")
    return EXIT_OK


def _load_series(args) -> estimation.ReturnSeries:
    return estimation.load_returns(args.input, column=args.column,
                                   has_header=args.has_header,
                                   prices_mode=args.prices, delimiter=args.delimiter)


def cmd_fit(args) -> int:
    series = _load_series(args)
    result = estimation.fit(series)
    p = result.params
    if args.json:
        _emit_json(args.json, {"kind": "fit", "n": len(series),
                               "omega": p.omega, "alpha": p.alpha, "beta": p.beta,
                               "gamma": result.gamma, "loglik": result.loglik,
                               "converged": result.converged,
                               "iterations": result.iterations,
                               "init_sigma_sq": result.init_sigma_sq})
    if not args.quiet:
        print(f"omega={p.omega!r} alpha={p.alpha!r} beta={p.beta!r} "
              f"gamma={result.gamma!r} loglik={result.loglik!r} converged={result.converged}")
    return EXIT_OK


def cmd_table1(args) -> int:
    series = _load_series(args)
    windows = [int(w) for w in args.windows.split(",")]
    rows = estimation.expanding_window_fit(series, windows)
    lines = ["n,alpha,beta,gamma"]
    for row in rows:
        lines.append(f"{row.n},{row.alpha!r},{row.beta!r},{row.gamma!r}")
    _write_text(args.csv, "\n".join(lines) + "\n")
    if args.json:
        _emit_json(args.json, {"kind": "table1", "rows": [
            {"n": r.n, "alpha": r.alpha, "beta": r.beta, "gamma": r.gamma,
             "converged": r.converged} for r in rows]})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nigarch",
                                     description="Near-integrated GARCH(1,1) toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--quiet", action="store_true")
        p.add_argument("--json", default=None, help="write a JSON report to this path")

    p = sub.add_parser("simulate", help="simulate one GARCH(1,1) path to CSV")
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma0-sq", type=float, default=None)
    p.add_argument("--innovation", default="normal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="Monte Carlo verification of one limit theorem")
    p.add_argument("--theorem", required=True, choices=["t21", "t22", "t23", "t24", "t25", "t26"])
    p.add_argument("--sign", required=True, choices=["negative", "zero", "positive"])
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--t", default="0.5,1.0", help="comma-separated time grid")
    p.add_argument("--innovation", default="normal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma0-sq", type=float, default=None,
                   help="start variance (default: omega)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--force", action="store_true",
                   help="run despite an overflow-risk flag")
    p.add_argument("--include-samples", action="store_true")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scheme-check", help="validate rate assumptions for a theorem regime")
    p.add_argument("--sign", required=True, choices=["negative", "zero", "positive"])
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theorem", required=True, choices=["t21", "t22", "t23", "t24", "t25", "t26"])
    p.add_argument("--innovation", default="normal")
    common(p)
    p.set_defaults(func=cmd_scheme_check)

    p = sub.add_parser("lemma41", help="weighted geometric sum vs its small-gamma asymptote")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_lemma41)

    def data_opts(p):
        p.add_argument("--input", required=True)
        p.add_argument("--column", type=int, default=0)
        p.add_argument("--prices", action="store_true",
                       help="input is prices; log-difference them")
        p.add_argument("--has-header", action="store_true")
        p.add_argument("--delimiter", default=",")

    p = sub.add_parser("fit", help="quasi-maximum-likelihood GARCH(1,1) fit")
    data_opts(p)
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("table1", help="expanding-window fits, columns n,alpha,beta,gamma")
    data_opts(p)
    p.add_argument("--windows", default="200,300,400,500,1000,1500,2000,2500")
    p.add_argument("--csv", default="-")
    common(p)
    p.set_defaults(func=cmd_table1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, SchemeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ExplosionError, GeometricOverflowError, OverflowRiskError) as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except DataError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
