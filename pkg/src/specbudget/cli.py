"""Command line entry point: ``specbudget {budget,bench,compare}``.

Exit codes: 0 success, 2 invalid flags, 3 I/O or input-file problems,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

from .bench import bench_grid, run_bench
from .config import BudgetConfig, SketchConfig
from .ensemble_spec import EnsembleSpec, ScoreSpec, load_ensemble_spec
from .errors import InputError, MatrixFormatError, NumericalError, ParseError
from .matrix_io import read_matrix
from .pruning import compare_policies
from .reports import budget_report, compare_report, render
from .spectral import budget
from .synthesis import mixed_profiles

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _shape(text):
    try:
        n_v, d_v = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shape must look like 576x1024, got {text!r}")
    if n_v < 1 or d_v < 1:
        raise argparse.ArgumentTypeError("shape dimensions must be positive")
    return n_v, d_v


def _add_budget_flags(p, multi=False):
    p.add_argument("--tau", type=float, default=0.99, help="energy threshold in (0, 1]")
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=None, help="defaults to the token count")
    if multi:
        p.add_argument("--t", type=_int_list, default=[300], help="comma-separated target dims")
        p.add_argument("--p", type=_int_list, default=[10], help="comma-separated oversampling")
        p.add_argument("--q", type=_int_list, default=[2], help="comma-separated power iterations")
    else:
        p.add_argument("--method", choices=("exact", "rsvd"), default="exact")
        p.add_argument("--t", type=int, default=300)
        p.add_argument("--p", type=int, default=10)
        p.add_argument("--q", type=int, default=2)
    p.add_argument("--seed", type=int, default=0, help="sketch seed")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--omit-timing", action="store_true", help="drop wall-clock fields")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specbudget", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("budget", help="token budgets for matrix files or a synthetic ensemble")
    pb.add_argument("inputs", nargs="*", help="EAPM or CSV matrix files")
    pb.add_argument("--ensemble", help="ensemble spec (JSON)")
    pb.add_argument("--jobs", type=int, default=1, help="instances processed in parallel")
    _add_budget_flags(pb)

    pe = sub.add_parser("bench", help="latency of exact vs randomized budgets")
    pe.add_argument("--shape", type=_shape, default=(576, 1024))
    pe.add_argument("--count", type=int, default=50)
    pe.add_argument("--ensemble", help="ensemble spec (JSON); overrides --shape/--count")
    pe.add_argument("--ensemble-seed", type=int, default=0)
    pe.add_argument("--flat-share", type=float, default=0.0)
    pe.add_argument("--methods", default="exact,rsvd")
    pe.add_argument("--warmup", type=int, default=3)
    pe.add_argument("--iterations", type=int, default=20, help="minimum timed iterations")
    pe.add_argument("--threads", type=int, default=1, help="BLAS threads (0 = leave as is)")
    _add_budget_flags(pe, multi=True)

    pc = sub.add_parser("compare", help="adaptive vs matched static budgets")
    pc.add_argument("--ensemble", required=True, help="ensemble spec (JSON)")
    pc.add_argument("--scores", choices=("random", "row_norm"), default=None)
    pc.add_argument("--score-seed", type=int, default=None)
    _add_budget_flags(pc)
    return parser


def _config(args, sketch=None) -> BudgetConfig:
    try:
        if sketch is None and getattr(args, "method", "exact") == "rsvd":
            sketch = SketchConfig(args.t, args.p, args.q, args.seed)
        return BudgetConfig(args.tau, args.k_min, args.k_max, sketch)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load_inputs(args):
    if args.ensemble and args.inputs:
        raise UsageError("give matrix files or --ensemble, not both")
    if args.ensemble:
        spec = load_ensemble_spec(args.ensemble)
        return [f"synthetic-{i:04d}" for i in range(len(spec.profiles))], spec.build()
    if not args.inputs:
        raise UsageError("no inputs: pass matrix files or --ensemble")
    ids, mats = [], []
    for path in args.inputs:
        ids.append(path)
        try:
            mats.append(read_matrix(path))
        except (OSError, MatrixFormatError) as exc:
            mats.append(exc)
    return ids, mats


def cmd_budget(args) -> int:
    cfg = _config(args)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    ids, mats = _load_inputs(args)

    def one(m):
        if isinstance(m, Exception):
            return m
        try:
            return budget(m, cfg)
        except (NumericalError, InputError, ValueError) as exc:
            return exc

    if args.jobs == 1:
        outcomes = [one(m) for m in mats]
    else:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(one, mats))
    report = budget_report(ids, outcomes, cfg, omit_timing=args.omit_timing)
    _emit(render(report, args.format), args.out)

    failures = [o for o in outcomes if isinstance(o, Exception)]
    if failures and len(failures) == len(outcomes):
        numeric = any(isinstance(f, NumericalError) for f in failures)
        return EXIT_NUMERIC if numeric else EXIT_IO
    return EXIT_OK


def cmd_bench(args) -> int:
    base = _config(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    if args.warmup < 0 or args.iterations < 1:
        raise UsageError("--warmup must be >= 0 and --iterations >= 1")
    try:
        configs = bench_grid(base, methods, args.t, args.p, args.q, args.seed)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.ensemble:
        mats = load_ensemble_spec(args.ensemble).build()
    else:
        n_v, d_v = args.shape
        try:
            profiles = mixed_profiles(args.count, min(n_v, d_v), args.ensemble_seed, args.flat_share)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        mats = EnsembleSpec(n_v, d_v, args.ensemble_seed, profiles).build()
    threads = args.threads if args.threads > 0 else None
    report = run_bench(mats, configs, args.warmup, args.iterations, threads, args.omit_timing)
    _emit(render(report, args.format), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config(args)
    spec = load_ensemble_spec(args.ensemble)
    score_spec = spec.scores or ScoreSpec()
    if args.scores is not None or args.score_seed is not None:
        score_spec = ScoreSpec(
            args.scores or score_spec.kind,
            score_spec.seed if args.score_seed is None else args.score_seed,
        )
    mats = spec.build()
    comparison = compare_policies(mats, score_spec.scores_for(mats), cfg)
    report = compare_report(
        comparison,
        cfg,
        ensemble=spec.to_dict(),
        scores={"kind": score_spec.kind, "seed": score_spec.seed},
    )
    _emit(render(report, args.format), args.out)
    return EXIT_OK


COMMANDS = {"budget": cmd_budget, "bench": cmd_bench, "compare": cmd_compare}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"specbudget {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ParseError, MatrixFormatError, InputError) as exc:
        print(f"specbudget {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"specbudget {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
