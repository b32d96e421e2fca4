"""Command-line front end: scenario sweeps and verification suites."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import SystemConfig
from .experiments import SCENARIOS, run_scenario
from .verify import run_suite


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noma-bc",
        description="Backscatter-assisted NOMA downlink: sum-rate "
                    "optimization sweeps and self-verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser(
        "simulate", help="run a scenario sweep and write its CSV artifact")
    sim.add_argument("--scenario", choices=SCENARIOS, required=True)
    sim.add_argument("--config", type=Path, default=None,
                     help="JSON file of config fields (defaults otherwise)")
    sim.add_argument("--seed", type=int, default=None,
                     help="override the config's RNG seed")
    sim.add_argument("--trials", type=int, default=500,
                     help="Monte Carlo trials (default 500)")
    sim.add_argument("--out", type=Path, required=True,
                     help="output directory (created if missing)")

    ver = sub.add_parser(
        "verify", help="run an independent verification suite")
    ver.add_argument("--suite", choices=("oracle", "calculus", "trends"),
                     required=True)
    ver.add_argument("--quick", action="store_true",
                     help="smaller sample counts for a fast smoke pass")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "simulate":
        cfg = (SystemConfig.from_json(args.config)
               if args.config is not None else SystemConfig())
        if args.seed is not None:
            if args.seed < 0:
                raise SystemExit("--seed must be non-negative")
            cfg = replace(cfg, rng_seed=args.seed)
        path = run_scenario(args.scenario, cfg, args.trials, args.out)
        print(path)
        return 0

    results = run_suite(args.suite, quick=args.quick)
    for res in results:
        print(res.line())
    return 0 if all(res.passed for res in results) else 1


if __name__ == "__main__":
    sys.exit(main())
