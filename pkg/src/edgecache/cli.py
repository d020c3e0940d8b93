"""Command-line entry points: run experiments, generate traces, self-check.

Exit codes: 0 on success, 1 when validation (config or self-check) fails,
2 on runtime errors.
"""

import argparse
import sys

from .harness import ExperimentConfig, run_experiment, run_sweep
from .workload import WorkloadSpec, generate_trace, write_trace

SWEEPABLE = {"phi": float, "capacity": int, "beta": float}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="edgecache",
        description="Online service caching and routing experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and emit CSV metrics")
    run.add_argument("--config", help="key=value config file")
    run.add_argument("--phi", help="service rate; comma list sweeps it")
    run.add_argument("--z", help="cache capacity; comma list sweeps it")
    run.add_argument("--beta", help="installation cost; comma list sweeps it")
    run.add_argument("--eta", type=float, help="learner step size")
    run.add_argument("--k", type=int, help="number of sample paths for ROCR")
    run.add_argument("--t", type=int, help="horizon in slots")
    run.add_argument("--n", type=int, help="number of services")
    run.add_argument("--seed", help="comma-separated seeds")
    run.add_argument("--policies", help="comma-separated subset of OCR,ROCR,OGA,OFF")
    run.add_argument("--trace", help="read arrivals from this trace file")
    run.add_argument("--out", help="output directory")

    gen = sub.add_parser("gen-trace", help="generate a synthetic trace file")
    gen.add_argument("--n", type=int, default=100, help="number of services")
    gen.add_argument("--t", type=int, default=1000, help="horizon in slots")
    gen.add_argument("--alpha", type=float, default=0.8, help="Zipf exponent")
    gen.add_argument("--requests", type=float, default=100.0,
                     help="total requests per slot")
    gen.add_argument("--shuffle-period", type=int, default=50)
    gen.add_argument("--shuffle-fraction", type=float, default=0.2)
    gen.add_argument("--poisson", action="store_true",
                     help="sample Poisson counts instead of expected rates")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="trace file to write")

    val = sub.add_parser("validate", help="run randomized invariant self-checks")
    val.add_argument("--seed", type=int, default=0)
    return parser


def _apply_run_overrides(config, args):
    """Flag overrides on top of the config file; returns (config, sweep)."""
    import dataclasses

    updates = {}
    sweep = None
    flag_to_field = {"phi": "phi", "z": "capacity", "beta": "beta"}
    for flag, fld in flag_to_field.items():
        raw = getattr(args, flag)
        if raw is None:
            continue
        cast = SWEEPABLE[fld]
        vals = [cast(v) for v in raw.split(",") if v.strip()]
        if len(vals) > 1:
            if sweep is not None:
                raise ValueError("only one parameter may be swept per run")
            sweep = (fld, vals)
        else:
            updates[fld] = vals[0]
    if args.eta is not None:
        updates["eta"] = args.eta
    if args.k is not None:
        updates["K"] = args.k
    if args.t is not None:
        updates["horizon"] = args.t
    if args.n is not None:
        updates["n_services"] = args.n
    if args.seed is not None:
        updates["seeds"] = tuple(int(s) for s in args.seed.split(","))
    if args.policies is not None:
        updates["policies"] = tuple(
            p.strip().upper() for p in args.policies.split(",") if p.strip()
        )
    if args.trace is not None:
        updates["trace_path"] = args.trace
    if args.out is not None:
        updates["out_dir"] = args.out
    return dataclasses.replace(config, **updates), sweep


def _cmd_run(args):
    try:
        config = (
            ExperimentConfig.from_file(args.config)
            if args.config
            else ExperimentConfig()
        )
        config, sweep = _apply_run_overrides(config, args)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        if sweep is None:
            costs, regret = run_experiment(config)
            print(f"wrote {costs}")
            print(f"wrote {regret}")
        else:
            summary = run_sweep(config, sweep[0], sweep[1])
            print(f"wrote {summary}")
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_gen_trace(args):
    try:
        spec = WorkloadSpec(
            n_services=args.n,
            horizon=args.t,
            zipf_exponent=args.alpha,
            requests_per_slot=args.requests,
            shuffle_period=args.shuffle_period,
            shuffle_fraction=args.shuffle_fraction,
            seed=args.seed,
            poisson=args.poisson,
        )
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        write_trace(args.out, generate_trace(spec))
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


def _cmd_validate(args):
    from .checks import run_all

    ok, lines = run_all(seed=args.seed)
    for line in lines:
        print(line)
    return 0 if ok else 1


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "gen-trace": _cmd_gen_trace,
        "validate": _cmd_validate,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
