"""Command-line interface.

Subcommands:
  subcert run --config cfg.toml|cfg.json [--out PATH --format csv|json]
  subcert bound --objective SPEC --method NAME [--method ...] --k LIST
  subcert validate --objective SPEC [--trials N --seed S]
"""

import argparse
import sys

from .harness import (BOUND_METHODS, ExperimentConfig, emit, load_config,
                      parse_objective, run)
from .maximizers import DEFAULT_ENUM_CAP
from .objectives import check_oracle


def _parse_k_list(text):
    ks = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part and not part.startswith("-"):
            lo, hi = part.split("-", 1)
            ks.extend(range(int(lo), int(hi) + 1))
        elif part:
            ks.append(int(part))
    if not ks or any(b <= a for a, b in zip(ks, ks[1:])):
        raise argparse.ArgumentTypeError(
            "k list must be strictly increasing, e.g. 1,2,5 or 1-10")
    return ks


def _cmd_run(args):
    config = load_config(args.config)
    if args.out:
        config.out = args.out
    if args.format:
        config.format = args.format
    report = run(config)
    text = emit(report, config.format, config.out)
    if config.out:
        print(f"wrote {config.out} ({config.format}, "
              f"{len(report.rows)} rows, {report.failed_cells} failed cells)")
    else:
        print(text)
    return 1 if report.failed_cells else 0


def _cmd_bound(args):
    config = ExperimentConfig.from_dict({
        "instances": [{"name": args.objective, "objective": args.objective}],
        "ks": args.k,
        "algorithms": ["greedy"],
        "bounds": args.method,
        "seeds": [args.seed],
        "cap": args.cap,
    })
    report = run(config)
    text = emit(report, args.format, args.out)
    if args.out:
        print(f"wrote {args.out}")
    else:
        print(text)
    return 1 if report.failed_cells else 0


def _cmd_validate(args):
    oracle, _ = parse_objective(args.objective, seed=args.seed)
    rep = check_oracle(oracle, trials=args.trials, tol=args.tol, seed=args.seed)
    verdict = "ok" if rep.ok else "VIOLATED"
    print(f"{args.objective}: {verdict}")
    print(f"  trials                : {rep.trials}")
    print(f"  monotone violations   : {rep.monotone_violations} "
          f"(worst gap {rep.worst_monotone:.3e})")
    print(f"  submodular violations : {rep.submodular_violations} "
          f"(worst gap {rep.worst_submodular:.3e})")
    return 0 if rep.ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="subcert",
        description="Submodular maximization with instance-specific "
                    "upper-bound certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a config-driven sweep")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out")
    p_run.add_argument("--format", choices=("csv", "json"))
    p_run.set_defaults(func=_cmd_run)

    p_bound = sub.add_parser("bound", help="compute bounds for one objective")
    p_bound.add_argument("--objective", required=True)
    p_bound.add_argument("--method", action="append", required=True,
                         choices=BOUND_METHODS)
    p_bound.add_argument("--k", type=_parse_k_list, required=True,
                         help="comma list or ranges, e.g. 1,2,5 or 1-10")
    p_bound.add_argument("--seed", type=int, default=0)
    p_bound.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    p_bound.add_argument("--out")
    p_bound.add_argument("--format", choices=("csv", "json"), default="json")
    p_bound.set_defaults(func=_cmd_bound)

    p_val = sub.add_parser("validate",
                           help="probabilistic monotone/submodular check")
    p_val.add_argument("--objective", required=True)
    p_val.add_argument("--trials", type=int, default=1000)
    p_val.add_argument("--tol", type=float, default=1e-9)
    p_val.add_argument("--seed", type=int, default=0)
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
