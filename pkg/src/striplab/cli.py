"""Command-line front end: build / params / verify / check / recover / export.

Exit codes: 0 success (a reported "infeasible" is a result, not a failure),
1 usage or parameter error, 2 I/O or malformed frame file, 3 numerical
non-convergence.  All randomized commands require an explicit --seed.
Output is JSON by default (--csv for the same values as CSV); floats are
serialized with repr, which round-trips binary64 exactly.
"""

import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, conditions, constructions, frameio, frames, recovery, verify
from .errors import (
    BadMagic,
    DimensionMismatch,
    MaxItersExceeded,
    NonConvergence,
    RankDeficient,
    StripLabError,
    TruncatedPayload,
)

_IO_ERRORS = (OSError, BadMagic, TruncatedPayload, DimensionMismatch)
_NUMERIC_ERRORS = (NonConvergence, MaxItersExceeded, RankDeficient)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _jsonable(value):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(report, args):
    report = {k: _jsonable(v) for k, v in report.items()}
    if not getattr(args, "no_timestamp", False):
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    if getattr(args, "csv", False):
        sys.stdout.write(_csv_text(report))
    else:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _csv_value(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True).replace(",", ";")
    return str(v)


def _csv_text(report):
    keys = sorted(report)
    head = ",".join(keys)
    row = ",".join(_csv_value(report[k]) for k in keys)
    return head + "\n" + row + "\n"


def _add_output_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output (default)")
    g.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp field for byte-stable output")


def _build_parser():
    top = _Parser(prog="striplab", description=__doc__)
    top.add_argument("--version", action="version", version=f"striplab {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a family instance and save it")
    b.add_argument("family", choices=sorted(constructions.FAMILIES))
    b.add_argument("--m", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--s", type=int)
    b.add_argument("--r", type=int)
    b.add_argument("--t", type=int)
    b.add_argument("--p", type=int)
    b.add_argument("--d", type=int)
    b.add_argument("--coeffs", type=str,
                   help="polynomial coefficients, highest degree first, comma-separated")
    b.add_argument("--seed", type=int)
    b.add_argument("--budget", type=int, default=constructions.DEFAULT_COLUMN_BUDGET)
    b.add_argument("-o", "--out", required=True)
    _add_output_flags(b)

    pa = sub.add_parser("params", help="coherence/spectral statistics of a frame file")
    pa.add_argument("frame")
    _add_output_flags(pa)

    v = sub.add_parser("verify", help="tail estimation for StRIP / SINC statistics")
    v.add_argument("statistic", choices=["strip", "sinc", "colsum"])
    v.add_argument("frame")
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--threshold", type=float, required=True)
    mode = v.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--ci", type=float, default=0.99)
    v.add_argument("--budget", type=int, default=10**7)
    _add_output_flags(v)

    c = sub.add_parser("check", help="sufficient-condition checkers")
    c.add_argument("checker", choices=["thm1", "thm2", "cor1", "regime", "sinclevel"])
    c.add_argument("--frame")
    c.add_argument("--mu", type=float)
    c.add_argument("--mu2", type=float, help="mean square coherence")
    c.add_argument("--normsq", type=float, help="squared spectral norm")
    c.add_argument("--m", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--delta", type=float)
    c.add_argument("--eps", type=float)
    c.add_argument("--beta", type=float)
    c.add_argument("--a", type=float)
    c.add_argument("--alpha", type=float)
    c.add_argument("--grid", type=int, default=64)
    for i in range(1, 7):
        c.add_argument(f"--c{i}", type=float, default=1.0)
    _add_output_flags(c)

    r = sub.add_parser("recover", help="generic-model Basis Pursuit experiment")
    r.add_argument("frame")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--trials", type=int, required=True)
    r.add_argument("--eps", type=float, required=True)
    r.add_argument("--delta", type=float, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--mag", type=str, default="unit", help="unit or uniform:LO,HI")
    r.add_argument("--tol", type=float, default=1e-9, help="solver feasibility tolerance")
    _add_output_flags(r)

    e = sub.add_parser("export", help="write the params row of a frame as CSV")
    e.add_argument("frame")
    e.add_argument("--csv", dest="csv_out", required=True, metavar="OUT")
    return top


def _build_family(args):
    fam = args.family
    need = lambda flag, val: val if val is not None else _fail(f"build {fam} needs --{flag}")
    if fam == "gaussian":
        return constructions.build_gaussian(need("m", args.m), need("n", args.n),
                                            need("seed", args.seed))
    if fam == "random-harmonic":
        return constructions.build_random_harmonic(need("m", args.m), need("n", args.n),
                                                   need("seed", args.seed))
    if fam == "chirp":
        return constructions.build_chirp(need("m", args.m))
    if fam == "simplex-etf":
        return constructions.build_simplex_etf(need("m", args.m))
    if fam == "reed-muller":
        return constructions.build_reed_muller(need("s", args.s), need("t", args.t),
                                               column_budget=args.budget)
    if fam == "delsarte-goethals":
        return constructions.build_delsarte_goethals(need("s", args.s), need("r", args.r),
                                                     column_budget=args.budget)
    if fam == "sub-fourier":
        coeffs = [int(c) for c in need("coeffs", args.coeffs).split(",")]
        return constructions.build_sub_fourier(need("p", args.p), need("d", args.d),
                                               coeffs, need("m", args.m))
    raise _UsageError(f"unknown family {fam}")


def _fail(msg):
    raise _UsageError(msg)


def _params_row(phi):
    profile = frames.coherence_profile(phi)
    return {
        "family": phi.family,
        "m": phi.m,
        "N": phi.N,
        "mu": profile.mu,
        "mu-bar-sq": profile.mu_bar_sq,
        "spectral-norm": profile.spectral_norm,
        "coherence-invariant": profile.coherence_invariant,
        "tight-frame-defect": profile.tight_frame_defect,
    }


def _cmd_build(args):
    phi = _build_family(args)
    frameio.save_frame(phi, args.out)
    _emit({"family": phi.family, "m": phi.m, "N": phi.N, "seed": phi.seed,
           "path": args.out}, args)
    return 0


def _cmd_params(args):
    _emit(_params_row(frameio.load_frame(args.frame)), args)
    return 0


def _cmd_verify(args):
    phi = frameio.load_frame(args.frame)
    statistic = {"strip": "strip-delta", "sinc": "sinc-max", "colsum": "column-sum"}[args.statistic]
    if args.exhaustive:
        q = verify.TailQuery(statistic, args.k, args.threshold, "exhaustive",
                             ci_level=args.ci, subset_budget=args.budget)
    else:
        if args.seed is None:
            raise _UsageError("--trials requires --seed")
        q = verify.TailQuery(statistic, args.k, args.threshold, "monte-carlo",
                             trials=args.trials, seed=args.seed, ci_level=args.ci,
                             subset_budget=args.budget)
    est = verify.estimate_tail(phi, q)
    _emit({
        "statistic": est.statistic, "k": est.k, "threshold": est.threshold,
        "method": q.method, "exceedances": est.exceedances, "samples": est.samples,
        "point-estimate": est.point_estimate, "ci-low": est.ci_low,
        "ci-high": est.ci_high, "ci-level": est.ci_level, "exact": est.exact,
        "seed": est.seed, "hoeffding-halfwidth": est.hoeffding_halfwidth,
    }, args)
    return 0


def _condition_inputs(args):
    if args.frame is not None:
        phi = frameio.load_frame(args.frame)
        profile = frames.coherence_profile(phi)
        mu, mu2 = profile.mu, profile.mu_bar_sq
        normsq, m, n = profile.spectral_norm**2, phi.m, phi.N
    else:
        for flag in ("mu", "mu2", "normsq", "m", "n"):
            if getattr(args, flag) is None:
                raise _UsageError(f"check needs --frame or explicit --{flag}")
        mu, mu2, normsq, m, n = args.mu, args.mu2, args.normsq, args.m, args.n
    if args.k is None:
        raise _UsageError("check needs --k")
    return conditions.ConditionInputs(
        mu=mu, mu_bar_sq=mu2, spectral_norm_sq=normsq, m=m, N=n, k=args.k,
        delta=args.delta if args.delta is not None else 0.5,
        eps=args.eps if args.eps is not None else 0.01)


def _cmd_check(args):
    if args.checker == "sinclevel":
        for flag in ("n", "delta", "eps"):
            if getattr(args, flag) is None:
                raise _UsageError(f"sinclevel needs --{flag}")
        _emit({"alpha": conditions.required_sinc_level(args.delta, args.n, args.eps),
               "delta": args.delta, "N": args.n, "eps": args.eps}, args)
        return 0
    if args.checker == "cor1":
        for flag in ("mu", "mu2", "k", "alpha", "beta", "a"):
            if getattr(args, flag) is None:
                raise _UsageError(f"cor1 needs --{flag}")
        res = conditions.check_corollary1(args.mu, args.mu2, args.k,
                                          args.alpha, args.beta, args.a)
        _emit(res, args)
        return 0
    inputs = _condition_inputs(args)
    if args.checker == "thm1":
        if args.delta is None or args.eps is None:
            raise _UsageError("thm1 needs --delta and --eps")
        w = conditions.check_theorem1(inputs, grid_points=args.grid)
        _emit({"feasible": w.feasible, "a": w.a, "b": w.b, "c": w.c,
               "slack": w.slack, "binding-constraint": w.binding_constraint}, args)
        return 0
    if args.checker == "thm2":
        if args.eps is None:
            raise _UsageError("thm2 needs --eps")
        if args.beta is not None and args.a is not None:
            res = conditions.check_theorem2(inputs, args.beta, args.a)
        elif args.alpha is not None:
            res = conditions.theorem2_scan(inputs, args.alpha)
        else:
            raise _UsageError("thm2 needs --beta and --a, or --alpha for the scan")
        _emit(res, args)
        return 0
    if args.checker == "regime":
        consts = {f"c{i}": getattr(args, f"c{i}") for i in range(1, 7)}
        rep = conditions.regime_report(inputs, consts)
        flat = {"re1": rep["re1"], "re2": rep["re2"], "new": rep["new"],
                "heuristic": rep["heuristic"]}
        flat.update({k: v for k, v in rep["constants"].items()})
        flat.update({f"threshold-{k}": v for k, v in rep["thresholds"].items()})
        _emit(flat, args)
        return 0
    raise _UsageError(f"unknown checker {args.checker}")


def _cmd_recover(args):
    phi = frameio.load_frame(args.frame)
    cfg = recovery.SolverConfig(feas_tol=args.tol)
    summary = recovery.recovery_experiment(
        phi, args.k, args.trials, args.eps, args.delta,
        magnitude_rule=args.mag, seed=args.seed, cfg=cfg)
    flat = {
        "trials": summary["trials"], "k": summary["k"], "eps": summary["eps"],
        "delta": summary["delta"], "failures": summary["failures"],
        "failure-rate": summary["failure_rate"],
        "failure-ci-low": summary["failure_ci"][0],
        "failure-ci-high": summary["failure_ci"][1],
        "exact-recoveries": summary["exact_recoveries"],
        "exact-recovery-rate": summary["exact_recovery_rate"],
        "exact-ci-low": summary["exact_recovery_ci"][0],
        "exact-ci-high": summary["exact_recovery_ci"][1],
        "three-eps": summary["three_eps"], "max-residual": summary["max_residual"],
        "seed": summary["seed"],
    }
    _emit(flat, args)
    return 0


def _cmd_export(args):
    row = _params_row(frameio.load_frame(args.frame))
    row = {k: _jsonable(v) for k, v in row.items()}
    with open(args.csv_out, "w", encoding="utf-8") as fh:
        fh.write(_csv_text(row))
    return 0


def run(argv):
    """Dispatch a CLI invocation; returns the process exit code."""
    threads = os.environ.get("STRIPLAB_THREADS")
    if threads is not None:
        try:
            int(threads)
        except ValueError:
            sys.stderr.write("striplab: STRIPLAB_THREADS must be an integer\n")
            return 1
        # worker cap accepted for compatibility; the engine is single-process
        # and bit-identical for any value.
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "build": _cmd_build,
            "params": _cmd_params,
            "verify": _cmd_verify,
            "check": _cmd_check,
            "recover": _cmd_recover,
            "export": _cmd_export,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        sys.stderr.write(f"striplab: usage error: {exc}\n")
        return 1
    except _NUMERIC_ERRORS as exc:
        sys.stderr.write(f"striplab: numerical failure: {exc}\n")
        return 3
    except _IO_ERRORS as exc:
        sys.stderr.write(f"striplab: i/o error: {exc}\n")
        return 2
    except (StripLabError, ValueError) as exc:
        sys.stderr.write(f"striplab: error: {exc}\n")
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
