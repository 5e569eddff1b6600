"""Command-line front end.

Subcommands: fit, eval, qp, reconstruct, gen, study, fixtures.  Datasets
travel as CSV (header x1,...,xm,y, one observation per line, '#'
comments); models and constraints as JSON problem documents.  Exit
codes: 0 success, 1 usage, 2 malformed data, 3 numerical failure.
"""

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, datagen, inverse, qp
from .errors import DataError, NumericalError, QuadinvError, UsageError
from .model import (ConstraintSet, Dataset, QuadraticModel, load_problem,
                    problem_to_dict, residuals, save_problem)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


# --- dataset CSV ------------------------------------------------------------

def load_dataset(path) -> Dataset:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = [row for row in csv.reader(fh)
                    if row and not row[0].lstrip().startswith("#")]
    except FileNotFoundError as exc:
        raise DataError(f"cannot read dataset file: {path}") from exc
    if len(rows) < 2:
        raise DataError(f"dataset file {path} has no data rows")
    header = [cell.strip() for cell in rows[0]]
    m = len(header) - 1
    if m < 1 or header[-1] != "y" or header[:-1] != [f"x{j+1}" for j in range(m)]:
        raise DataError(
            f"dataset file {path} must have header x1,...,xm,y (got {header})")
    pts, vals = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != m + 1:
            raise DataError(f"{path}: row {lineno} has {len(row)} cells, expected {m + 1}")
        try:
            nums = [float(cell) for cell in row]
        except ValueError as exc:
            raise DataError(f"{path}: row {lineno}: {exc}") from exc
        if not all(np.isfinite(nums)):
            raise DataError(f"{path}: row {lineno} contains non-finite values")
        pts.append(nums[:-1])
        vals.append(nums[-1])
    return Dataset(points=np.array(pts), values=np.array(vals))


def save_dataset(path, data: Dataset) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join([f"x{j+1}" for j in range(data.m)] + ["y"]) + "\n")
        for i in range(data.n):
            cells = [repr(float(v)) for v in data.points[i]]
            cells.append(repr(float(data.values[i])))
            fh.write(",".join(cells) + "\n")


def load_constraints(path) -> ConstraintSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise DataError(f"cannot read constraints file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict) or "A" not in doc or "b" not in doc:
        raise DataError(f'constraints file {path} needs keys "A" and "b"')
    try:
        return ConstraintSet(A=np.asarray(doc["A"], dtype=np.float64),
                             b=np.asarray(doc["b"], dtype=np.float64))
    except (TypeError, ValueError, UsageError) as exc:
        raise DataError(f"malformed constraints in {path}: {exc}") from exc


# --- output helpers ---------------------------------------------------------

def _fmt(value, full: bool) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value)) if full else f"{value:.6g}"
    if isinstance(value, np.ndarray):
        return "[" + ", ".join(_fmt(float(v), full) for v in value.reshape(-1)) + "]"
    return str(value)


def _emit(key, value, args) -> None:
    if getattr(args, "pretty", False):
        print(f"{key:>24s} : {_fmt(value, args.full_precision)}")
    else:
        print(f"{key}={_fmt(value, args.full_precision)}")


def _print_fit(result: inverse.FitResult, data: Dataset, args) -> None:
    _emit("N", data.n, args)
    _emit("m", data.m, args)
    _emit("rank", result.rank, args)
    _emit("cond", result.cond, args)
    _emit("phi", result.phi_residual, args)
    _emit("Q", result.q_residual, args)
    _emit("w00", result.w00, args)
    _emit("solver", result.solver_used, args)
    full_rank = (data.m + 1) * (data.m + 2) // 2
    if result.rank < full_rank:
        print(f"warning: system rank {result.rank} is below the full "
              f"symmetric-feature rank {full_rank}; the fit is the "
              f"minimum-norm member of a solution family", file=sys.stderr)


def _print_solution(sol: qp.QpSolution, args) -> None:
    for warning in sol.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    _emit("x_star", sol.x_star, args)
    _emit("f_star", sol.f_star, args)
    _emit("active_set", "[" + ", ".join(str(i) for i in sol.active_set) + "]", args)
    _emit("multipliers", np.asarray(sol.multipliers), args)


# --- subcommands ------------------------------------------------------------

def cmd_fit(args) -> int:
    data = load_dataset(args.data)
    result = inverse.fit(data, solver=args.solver, rank_tol=args.rank_tol,
                         ridge=args.ridge)
    _print_fit(result, data, args)
    if args.out:
        save_problem(args.out, result.model, w00=result.w00)
    else:
        print(json.dumps(problem_to_dict(result.model, w00=result.w00)))
    return 0


def cmd_eval(args) -> int:
    model, w00, _ = load_problem(args.model)
    data = load_dataset(args.data)
    if data.m != model.dim:
        raise DataError(
            f"dataset dimension {data.m} does not match model dimension {model.dim}")
    from .model import assemble_W, phi_objective, q_objective
    _emit("phi", phi_objective(model, data), args)
    _emit("Q", q_objective(assemble_W(model, w00), data), args)
    if args.per_point:
        for i, r in enumerate(residuals(model, data)):
            _emit(f"residual[{i}]", float(r), args)
    return 0


def cmd_qp(args) -> int:
    model, w00, cons = load_problem(args.problem)
    if cons is None:
        raise DataError(f'problem file {args.problem} has no constraints ("A", "b")')
    sol = qp.solve_qp(model, cons)
    _print_solution(sol, args)
    if w00:
        _emit("f_star_with_offset", sol.f_star + 0.5 * w00, args)
    return 0


def cmd_reconstruct(args) -> int:
    data = load_dataset(args.data)
    cons = load_constraints(args.constraints)
    if cons.m != data.m:
        raise DataError(
            f"constraint dimension {cons.m} does not match dataset dimension {data.m}")
    result, sol = qp.reconstruct(data, cons, solver=args.solver,
                                 rank_tol=args.rank_tol, ridge=args.ridge)
    _print_fit(result, data, args)
    _print_solution(sol, args)
    return 0


def cmd_gen(args) -> int:
    model, _, _ = load_problem(args.model)
    if args.points:
        pts = load_dataset(args.points).points
        if pts.shape[1] != model.dim:
            raise DataError("points file dimension does not match the model")
    else:
        if args.sample < 1:
            raise UsageError("--sample must be >= 1")
        center = np.zeros(model.dim)
        if args.center:
            try:
                center = np.array([float(v) for v in args.center.split(",")])
            except ValueError as exc:
                raise UsageError(f"bad --center value: {exc}") from exc
            if center.shape != (model.dim,):
                raise UsageError(f"--center must have {model.dim} components")
        rng = np.random.default_rng(args.seed)
        pts = center + rng.uniform(-args.half_width, args.half_width,
                                   size=(args.sample, model.dim))
    data = datagen.forward_values(model, pts)
    if args.noise > 0 or args.round_decimals is not None:
        spec = datagen.NoiseSpec(x_amplitude=args.noise, y_amplitude=args.noise,
                                 rounding_decimals=args.round_decimals,
                                 seed=args.seed)
        data = datagen.perturb(data, spec)
    save_dataset(args.out, data)
    return 0


def cmd_study(args) -> int:
    if args.n_min > args.n_max:
        raise UsageError("--n-min must not exceed --n-max")
    if args.n_min < 1 or args.n_step < 1:
        raise UsageError("--n-min and --n-step must be >= 1")
    n_range = list(range(args.n_min, args.n_max + 1, args.n_step))
    sampler = datagen.SampleSpec(seed=args.seed)
    if args.noise > 0:
        sampler = datagen.SampleSpec(
            seed=args.seed,
            noise=datagen.NoiseSpec(x_amplitude=args.noise,
                                    y_amplitude=args.noise))
    report = datagen.condition_study(args.m, n_range, args.trials,
                                     sampler=sampler, solver=args.solver,
                                     ridge=args.ridge)
    if all(row.failed for row in report.rows):
        raise NumericalError("every study trial failed")
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(report.to_csv())
    for (m, n), med in report.median_cond().items():
        _emit(f"median_cond[m={m},N={n}]", med, args)
    return 0


def cmd_fixtures(args) -> int:
    if args.name not in datagen.FIXTURE_NAMES:
        raise UsageError(
            f"unknown fixture {args.name!r}; valid names: "
            f"{', '.join(datagen.FIXTURE_NAMES)}")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    data, model, cons = datagen.fixture(args.name)
    meta = datagen.fixture_metadata(args.name)
    save_dataset(out_dir / f"{args.name}-data.csv", data)
    save_problem(out_dir / f"{args.name}-model.json", model)
    with open(out_dir / f"{args.name}-constraints.json", "w", encoding="utf-8") as fh:
        json.dump({"A": cons.A.tolist(), "b": cons.b.tolist()}, fh, indent=2)
        fh.write("\n")
    with open(out_dir / f"{args.name}-meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    _emit("written", str(out_dir), args)
    return 0


# --- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get("QUADINV_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QUADINV_SEED must be an integer, got {raw!r}")


def _add_common(p):
    p.add_argument("--pretty", action="store_true",
                   help="aligned human-readable output")
    p.add_argument("--full-precision", action="store_true",
                   help="print numbers at full precision")


def _add_solver_flags(p):
    p.add_argument("--solver", choices=["pinv", "tikhonov"], default="pinv")
    p.add_argument("--lambda", dest="ridge", type=float, default=0.0,
                   help="Tikhonov regularization parameter")
    p.add_argument("--rank-tol", type=float, default=None,
                   help="singular value cutoff for the pseudoinverse")


def build_parser() -> _Parser:
    parser = _Parser(prog="quadinv",
                     description="Fit quadratic-program parameters from "
                                 "observed (x, y) pairs and solve the "
                                 "reconstructed direct problem.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit (G, c, w00) to a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--out", help="write the fitted model JSON here")
    _add_solver_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate residuals of a model on a dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--per-point", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("qp", help="solve a constrained quadratic program")
    p.add_argument("--problem", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_qp)

    p = sub.add_parser("reconstruct",
                       help="fit a model, then solve the direct problem")
    p.add_argument("--data", required=True)
    p.add_argument("--constraints", required=True)
    _add_solver_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("gen", help="generate a dataset from a model")
    p.add_argument("--model", required=True)
    p.add_argument("--points", help="CSV of evaluation points (y column ignored)")
    p.add_argument("--sample", type=int, default=0,
                   help="number of random points to draw instead of --points")
    p.add_argument("--center", help="comma-separated sampling box center")
    p.add_argument("--half-width", type=float, default=2.0)
    p.add_argument("--noise", type=float, default=0.0,
                   help="uniform perturbation amplitude for x and y")
    p.add_argument("--round", dest="round_decimals", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("study", help="conditioning study over sample count")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_solver_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("fixtures", help="export an embedded example fixture")
    p.add_argument("--name", required=True)
    p.add_argument("--out-dir", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            args.seed = _default_seed()
        if args.command == "gen" and not args.points and args.sample < 1:
            raise UsageError("gen needs either --points or --sample N")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QuadinvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
