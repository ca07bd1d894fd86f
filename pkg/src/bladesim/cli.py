"""Command-line interface.

Subcommands:
  simulate --scenario FILE --policy fuzzy|baseline [--csv OUT] [--svg OUT]
           [--metrics OUT] [--dt X] [--max-steps N]
  compare  --scenario FILE --out FILE [--dt X] [--max-steps N]
  gen      --seed N --blades K --out FILE

Exit codes: 0 goal (or success for compare/gen), 2 collision, 3 timeout,
4 invalid input.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from typing import Optional, Sequence

import yaml

from .export import export_comparison, export_csv, export_metrics, export_svg, metrics_to_mapping
from .scenario import Scenario, ScenarioError, generate_scenario, load_scenario
from .sim import compare_policies, run_simulation

EXIT_GOAL = 0
EXIT_COLLISION = 2
EXIT_TIMEOUT = 3
EXIT_INVALID = 4

_OUTCOME_CODES = {"goal": EXIT_GOAL, "collision": EXIT_COLLISION, "timeout": EXIT_TIMEOUT}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bladesim", description="Blade-field drone navigator")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario under one policy")
    sim.add_argument("--scenario", required=True)
    sim.add_argument("--policy", choices=["fuzzy", "baseline"], default="fuzzy")
    sim.add_argument("--csv")
    sim.add_argument("--svg")
    sim.add_argument("--metrics")
    sim.add_argument("--dt", type=float)
    sim.add_argument("--max-steps", type=int)

    cmp_ = sub.add_parser("compare", help="run both policies and report the path-length ratio")
    cmp_.add_argument("--scenario", required=True)
    cmp_.add_argument("--out", required=True)
    cmp_.add_argument("--dt", type=float)
    cmp_.add_argument("--max-steps", type=int)

    gen = sub.add_parser("gen", help="generate a seeded random scenario file")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--blades", type=int, required=True)
    gen.add_argument("--out", required=True)
    return parser


def _load_with_overrides(args: argparse.Namespace) -> Scenario:
    scenario = load_scenario(args.scenario)
    overrides = {}
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.max_steps is not None:
        overrides["max_steps"] = args.max_steps
    if overrides:
        scenario = dataclasses.replace(scenario, **overrides)
    return scenario


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            scenario = _load_with_overrides(args)
            log, metrics = run_simulation(scenario, args.policy)
            if args.csv:
                export_csv(log, args.csv)
            if args.svg:
                export_svg(log, scenario, args.svg)
            if args.metrics:
                export_metrics(metrics, args.metrics)
            yaml.safe_dump(metrics_to_mapping(metrics), sys.stdout, sort_keys=False)
            return _OUTCOME_CODES[metrics.outcome]
        if args.command == "compare":
            scenario = _load_with_overrides(args)
            comparison = compare_policies(scenario)
            export_comparison(comparison, args.out)
            print(f"fuzzy: {comparison.fuzzy.outcome}  baseline: {comparison.baseline.outcome}  "
                  f"ratio: {comparison.path_length_ratio}")
            return 0
        if args.command == "gen":
            doc = generate_scenario(args.seed, args.blades)
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                yaml.safe_dump(doc, fh, sort_keys=False)
            print(f"wrote {args.out}")
            return 0
    except (ScenarioError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
