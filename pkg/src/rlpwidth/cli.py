"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 computational failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .errors import ParameterError, RlpError
from .lp import dump_instance, load_instance, solve_lp
from .montecarlo import CMode, TrialConfig, build_instance, run_trials, trials_csv
from .theory import ConstantRhs, GaussianRhs, VectorRhs, solve_xi, xi_asymptote

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILURE = 3

# alpha -> (theory, simulation) reference values for a = 1, n = 50
TABLE1 = {
    20: (0.50402, 0.50626),
    40: (0.43907, 0.44119),
    120: (0.37264, 0.37256),
    200: (0.35032, 0.35176),
    400: (0.32545, 0.32473),
}
SWEEP_COLUMNS = ("alpha", "xi_opt", "asymptote", "ratio")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(float(x), ".17g")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _trial_count(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"trials must be >= 2 (standard error needs two samples), got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _gaussian_pair(text: str) -> tuple[float, float]:
    try:
        mean, std = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MEAN,STD, got {text!r}") from None
    if std < 0:
        raise argparse.ArgumentTypeError("gaussian std must be >= 0")
    return mean, std


def _add_rhs_flags(p: argparse.ArgumentParser):
    group = p.add_mutually_exclusive_group()
    group.add_argument("--a-const", type=float, default=None, metavar="VALUE",
                       help="every rhs component equals VALUE (default 1.0)")
    group.add_argument("--a-file", type=Path, default=None, metavar="PATH",
                       help="whitespace-separated rhs vector, one entry per constraint")
    group.add_argument("--a-gaussian", type=_gaussian_pair, default=None, metavar="MEAN,STD",
                       help="iid N(MEAN, STD^2) rhs components")


def _rhs_from_args(args, n: int | None):
    if args.a_file is not None:
        try:
            values = np.loadtxt(args.a_file, ndmin=1)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read --a-file: {exc}") from None
        if n is None:
            n = max(1, int(round(values.size / args.alpha)))
        return VectorRhs(tuple(values), n)
    if args.a_gaussian is not None:
        return GaussianRhs(*args.a_gaussian)
    return ConstantRhs(1.0 if args.a_const is None else args.a_const)


def _rhs_desc(rhs) -> dict:
    if isinstance(rhs, VectorRhs):
        return {"kind": "vector", "m": rhs.m, "n": rhs.n}
    if isinstance(rhs, GaussianRhs):
        return {"kind": "gaussian", "mean": rhs.mean, "std": rhs.std}
    return {"kind": "constant", "value": rhs.value}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rlpwidth",
        description="Asymptotic objectives of Gaussian random LPs (mean widths of random polyhedra).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theory", help="evaluate xi_opt(alpha; a) from the closed form")
    p.add_argument("--alpha", type=_positive_float, required=True)
    _add_rhs_flags(p)
    p.add_argument("--n", type=_positive_int, default=None,
                   help="normalization count for --a-file (default round(m / alpha))")
    p.add_argument("--tol", type=_positive_float, default=1e-10)
    fmt_group = p.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true")
    fmt_group.add_argument("--csv", action="store_true")

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the normalized objective magnitude")
    p.add_argument("--alpha", type=_positive_float, required=True)
    p.add_argument("--n", type=_positive_int, default=50)
    p.add_argument("--trials", type=_trial_count, default=200)
    p.add_argument("--seed", type=_seed, default=0)
    _add_rhs_flags(p)
    p.add_argument("--c-mode", choices=[m.value for m in CMode], default=CMode.FIXED_AXIS.value)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", type=Path, default=None, help="per-trial CSV output path")
    p.add_argument("--dump-instance", type=Path, default=None, metavar="PATH",
                   help="write the LP of trial --dump-trial to PATH and continue")
    p.add_argument("--dump-trial", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("solve", help="solve a dumped LP instance")
    p.add_argument("--load-instance", type=Path, required=True, metavar="PATH")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("table1", help="theory vs simulation for alpha in {20, 40, 120, 200, 400}, n = 50")
    p.add_argument("--trials", type=_trial_count, default=200)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--skip-sim", action="store_true")
    p.add_argument("--max-alpha", type=_positive_float, default=400.0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("sweep", help="xi_opt and its large-alpha asymptote on a log grid")
    p.add_argument("--alpha-min", type=_positive_float, required=True)
    p.add_argument("--alpha-max", type=_positive_float, required=True)
    p.add_argument("--points", type=_positive_int, default=25)
    p.add_argument("--a-const", type=float, default=1.0)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--json", action="store_true")
    return parser


def _record(command: str, argv, config: dict, results) -> dict:
    return {
        "command": command,
        "argv": list(argv),
        "config": config,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "version": __version__,
        "backend": kernels.BACKEND,
        "results": results,
    }


def _emit_json(record: dict, out) -> None:
    out.write(json.dumps(record, indent=2, allow_nan=False) + "\n")


# --------------------------------------------------------------------------
# commands


def cmd_theory(args, argv, out, err) -> dict:
    rhs = _rhs_from_args(args, args.n)
    res = solve_xi(rhs, args.alpha, args.tol)
    payload = res.as_dict()
    record = _record("theory", argv, {"alpha": args.alpha, "tol": args.tol, "rhs": _rhs_desc(rhs)}, payload)
    if args.json:
        _emit_json(record, out)
    elif args.csv:
        cols = ("alpha", "xi_opt", "x_star", "lambda_hat", "x_max", "mean_width")
        out.write(",".join(cols) + "\n")
        out.write(",".join(fmt(payload[c]) for c in cols) + "\n")
    else:
        for key in ("alpha", "xi_opt", "x_star", "lambda_hat", "x_max", "mean_width"):
            val = payload[key]
            out.write(f"{key:<12}{'inf' if val is None else format(val, '.10g')}\n")
    return record


def _theory_or_none(rhs, alpha):
    try:
        return solve_xi(rhs, alpha).xi_opt
    except RlpError:
        return None


def cmd_simulate(args, argv, out, err) -> dict:
    rhs = _rhs_from_args(args, args.n)
    cfg = TrialConfig(alpha=args.alpha, n=args.n, rhs=rhs, trials=args.trials,
                      master_seed=args.seed, c_mode=args.c_mode)
    if args.dump_instance is not None:
        if not 0 <= args.dump_trial < cfg.trials:
            raise UsageError(f"--dump-trial must be in [0, {cfg.trials})")
        dump_instance(build_instance(cfg, args.dump_trial), args.dump_instance)
    est = run_trials(cfg, workers=args.workers)
    theory = _theory_or_none(rhs, args.alpha)
    rel = None if theory is None or math.isnan(est.mean) else (est.mean - theory) / theory
    if args.out is not None:
        args.out.write_text(trials_csv(est))
    for w in est.warnings:
        err.write(f"warning: {w}\n")
    results = dict(est.as_dict(), theory=theory, relative_difference=rel)
    record = _record("simulate", argv, cfg.as_dict(), results)
    if args.json:
        _emit_json(record, out)
    else:
        out.write(f"alpha={cfg.alpha:g} m={cfg.m} n={cfg.n} trials={cfg.trials} seed={cfg.master_seed} "
                  f"c_mode={cfg.c_mode.value}\n")
        out.write(f"simulated  {est.mean:.6f} +- {est.stderr:.6f} (stderr over {len(est.values)} optimal trials)\n")
        if theory is not None:
            out.write(f"theory     {theory:.6f}\n")
            out.write(f"rel. diff  {100 * rel:+.3f}%\n")
        else:
            out.write("theory     n/a (no interior stationary point for this alpha/rhs)\n")
    return record


def cmd_solve(args, argv, out, err) -> dict:
    try:
        inst = load_instance(args.load_instance)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    sol = solve_lp(inst)
    payload = {
        "m": inst.m, "n": inst.n, "status": sol.status.value,
        "objective": None if math.isnan(sol.objective) else sol.objective,
        "normalized_magnitude": None if math.isnan(sol.objective) else abs(sol.objective) / math.sqrt(inst.n),
        "iterations": sol.iterations, "message": sol.message,
    }
    record = _record("solve", argv, {"instance": str(args.load_instance)}, payload)
    if args.json:
        _emit_json(record, out)
    else:
        out.write(f"status     {sol.status.value}\n")
        if sol.optimal:
            out.write(f"objective  {sol.objective:.17g}\n")
        if sol.message:
            out.write(f"message    {sol.message}\n")
    return record


def cmd_table1(args, argv, out, err) -> dict:
    rows = []
    n = 50
    for alpha, (ref_theory, ref_sim) in TABLE1.items():
        if alpha > args.max_alpha:
            continue
        theory = solve_xi(ConstantRhs(1.0), alpha).xi_opt
        row = {"alpha": float(alpha), "m": alpha * n, "n": n, "theory": theory,
               "reference_theory": ref_theory, "reference_simulation": ref_sim,
               "simulated_mean": None, "stderr": None, "relative_difference": None}
        if not args.skip_sim:
            est = run_trials(TrialConfig(alpha=alpha, n=n, trials=args.trials, master_seed=args.seed),
                             workers=args.workers)
            for w in est.warnings:
                err.write(f"warning (alpha={alpha}): {w}\n")
            row.update(simulated_mean=est.mean, stderr=est.stderr,
                       relative_difference=(est.mean - theory) / theory)
        rows.append(row)
    config = {"trials": args.trials, "seed": args.seed, "skip_sim": args.skip_sim,
              "max_alpha": args.max_alpha, "n": n}
    record = _record("table1", argv, config, rows)
    if args.json:
        _emit_json(record, out)
    else:
        out.write(f"{'alpha':>6} {'m':>6} {'n':>4} {'theory':>9} {'sim mean':>9} {'stderr':>9} {'rel diff':>9}\n")
        for r in rows:
            sim = "" if r["simulated_mean"] is None else f"{r['simulated_mean']:.5f}"
            se = "" if r["stderr"] is None else f"{r['stderr']:.5f}"
            rd = "" if r["relative_difference"] is None else f"{100 * r['relative_difference']:+.2f}%"
            out.write(f"{r['alpha']:>6g} {r['m']:>6} {r['n']:>4} {r['theory']:>9.5f} {sim:>9} {se:>9} {rd:>9}\n")
    return record


def sweep_rows(alpha_min: float, alpha_max: float, points: int, a_const: float = 1.0, err=None) -> list[dict]:
    alphas = np.geomspace(alpha_min, alpha_max, points) if points > 1 else np.array([alpha_min])
    rhs = ConstantRhs(a_const)
    rows = []
    for alpha in alphas:
        alpha = float(alpha)
        xi = _theory_or_none(rhs, alpha)
        asym = xi_asymptote(alpha) if alpha > 1 else None
        if asym is None and err is not None:
            err.write(f"warning: asymptote undefined for alpha={alpha:g} <= 1\n")
        if xi is None and err is not None:
            err.write(f"warning: no finite xi_opt for alpha={alpha:g} (objective unbounded or undefined)\n")
        ratio = xi / asym if (xi is not None and asym is not None) else None
        rows.append({"alpha": alpha, "xi_opt": xi, "asymptote": asym, "ratio": ratio})
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in rows:
        writer.writerow([fmt(r[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def read_sweep_csv(text: str) -> list[dict]:
    return [{k: (float(v) if v != "" else None) for k, v in row.items()}
            for row in csv.DictReader(io.StringIO(text))]


def cmd_sweep(args, argv, out, err) -> dict:
    if args.alpha_min > args.alpha_max:
        raise UsageError("--alpha-min must not exceed --alpha-max")
    rows = sweep_rows(args.alpha_min, args.alpha_max, args.points, args.a_const, err)
    config = {"alpha_min": args.alpha_min, "alpha_max": args.alpha_max, "points": args.points,
              "a_const": args.a_const}
    record = _record("sweep", argv, config, rows)
    text = sweep_csv(rows)
    if args.out is not None:
        args.out.write_text(text)
    if args.json:
        _emit_json(record, out)
    elif args.out is None:
        out.write(text)
    return record


COMMANDS = {
    "theory": cmd_theory,
    "simulate": cmd_simulate,
    "solve": cmd_solve,
    "table1": cmd_table1,
    "sweep": cmd_sweep,
}


def main(argv=None, out=None, err=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args, argv, out, err)
    except (UsageError, ParameterError) as exc:
        err.write(f"rlpwidth {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except RlpError as exc:
        err.write(f"rlpwidth {args.command}: {type(exc).__name__}: {exc}\n")
        diagnostics = getattr(exc, "diagnostics", None)
        if diagnostics:
            err.write(f"diagnostics: {json.dumps(diagnostics, default=str)}\n")
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
