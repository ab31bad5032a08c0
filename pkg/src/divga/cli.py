"""Command line entry point for the benchmark experiments.

    divga-bench landscape-compare --repetitions 10 --seed 0 --out results

Exit code 0 on success, 1 when the experiment itself fails, 2 on bad
arguments.
"""

from __future__ import annotations

import argparse
import sys

from .bench import EXPERIMENTS, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divga-bench",
        description="Run a benchmark experiment for the diversity-enhanced "
                    "genetic algorithm and write per-run and summary files.")
    parser.add_argument("experiment", choices=EXPERIMENTS,
                        help="which experiment to run")
    parser.add_argument("--population", type=int, default=None,
                        help="population size (per-experiment default)")
    parser.add_argument("--generations", type=int, default=None,
                        help="number of generations")
    parser.add_argument("--repetitions", type=int, default=None,
                        help="independent repetitions")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed; repetition r uses seed + r")
    parser.add_argument("--crossover", default=None,
                        choices=("midpoint", "eitheror", "between", "none"),
                        help="crossover method")
    parser.add_argument("--pairing", default=None,
                        choices=("all", "random"),
                        help="parent pairing strategy")
    parser.add_argument("--selection", default=None,
                        choices=("diverse", "topn"),
                        help="survivor selection method")
    parser.add_argument("--d0", type=float, default=None,
                        help="diversity penalty amplitude")
    parser.add_argument("--r0", type=float, default=None,
                        help="diversity penalty radius")
    parser.add_argument("--workers", type=int, default=None,
                        help="fitness worker processes, 0 for sequential")
    parser.add_argument("--out", default=".",
                        help="output directory (default: current directory)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "population": args.population,
        "generations": args.generations,
        "repetitions": args.repetitions,
        "crossover": args.crossover,
        "pairing": args.pairing,
        "selection": args.selection,
        "d0": args.d0,
        "r0": args.r0,
        "workers": args.workers,
    }
    try:
        report = run_experiment(args.experiment, overrides=overrides,
                                seed=args.seed, output_directory=args.out)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.summary)
    for label, path in report.files.items():
        print(f"wrote {label}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
