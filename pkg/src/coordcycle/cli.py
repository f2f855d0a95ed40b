"""Command-line interface.

Subcommands: ``simulate`` (trajectories + reports + figures per scenario),
``analyze`` (JSON reports only), ``sweep`` (parameter sweep of a base
scenario), ``render`` (figures only), and ``golden`` (the full set of
reference-figure scenarios).

Exit codes: 0 success, 2 configuration error, 3 when every executed run
terminated at the divergence guard (an informational outcome, expected for
the replicator dynamic).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .scenarios import (Config, GOLDEN_SCENARIOS, RunResult, load_config,
                        run_golden, run_scenario, run_sweep)
from .solver import ConfigError, TERM_DIVERGENCE

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE_ONLY = 3

_DEFAULT_OUT = "coordcycle-out"


def _out_dir(args) -> Path:
    if args.out_dir:
        return Path(args.out_dir)
    return Path(os.environ.get("COORDCYCLE_OUT", _DEFAULT_OUT))


def _add_common(sub: argparse.ArgumentParser, *, config_required: bool = True):
    if config_required:
        sub.add_argument("--config", required=True, type=Path,
                         help="YAML experiment file")
        sub.add_argument("--scenario", action="append", default=None,
                         metavar="NAME",
                         help="run only this scenario (repeatable)")
    sub.add_argument("--out-dir", default=None,
                     help="output directory (default: $COORDCYCLE_OUT or "
                          f"./{_DEFAULT_OUT})")
    sub.add_argument("--format", default="svg", choices=("svg", "png"),
                     help="figure format (default: svg)")
    sub.add_argument("--seed", type=int, default=None,
                     help="reserved; the dynamics are deterministic and "
                          "this flag is currently unused")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coordcycle",
        description="Simulate and analyze coordination games whose payoffs "
                    "slowly respond to aggregate behavior.")
    subs = parser.add_subparsers(dest="command", required=True)

    _add_common(subs.add_parser(
        "simulate", help="integrate scenarios and write all their artifacts"))
    _add_common(subs.add_parser(
        "analyze", help="write JSON stability/orbit reports only"))
    sweep = subs.add_parser("sweep", help="run the configured parameter sweep")
    sweep.add_argument("--config", required=True, type=Path)
    sweep.add_argument("--out-dir", default=None)
    sweep.add_argument("--format", default="svg", choices=("svg", "png"))
    sweep.add_argument("--seed", type=int, default=None)
    _add_common(subs.add_parser("render", help="render phase portraits only"))
    _add_common(subs.add_parser(
        "golden", help="run every reference-figure scenario"),
        config_required=False)
    return parser


def _select_scenarios(config: Config, names) -> list:
    if not names:
        return list(config.scenarios.values())
    missing = [n for n in names if n not in config.scenarios]
    if missing:
        raise ConfigError(f"unknown scenario(s): {', '.join(missing)}")
    return [config.scenarios[n] for n in names]


def _restrict_outputs(sc, keep: tuple[str, ...]):
    import dataclasses
    outputs = tuple(o for o in sc.outputs if o in keep)
    return dataclasses.replace(sc, outputs=outputs)


def _exit_code(results: list[RunResult]) -> int:
    if results and all(r.trajectory.termination == TERM_DIVERGENCE
                       for r in results):
        return EXIT_DIVERGENCE_ONLY
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = _out_dir(args)
    try:
        if args.command == "golden":
            results = run_golden(out_dir, figure_format=args.format)
            for r in results:
                print(f"{r.scenario.name}: {r.outcome} "
                      f"({len(r.trajectory.crossings)} crossings, "
                      f"t_end={r.trajectory.t[-1]:.6g})")
            print(f"artifacts written to {out_dir}")
            return _exit_code(results)

        config = load_config(args.config)
        if args.command == "sweep":
            if config.sweep is None:
                raise ConfigError(f"{args.config}: no 'sweep' section")
            rows = run_sweep(config.sweep, out_dir)
            for row in rows:
                print(f"{row.axis}={row.value:g}: {row.outcome}")
            return EXIT_OK

        keep = {"simulate": ("csv", "json", "svg"),
                "analyze": ("json",),
                "render": ("svg",)}[args.command]
        results = []
        for sc in _select_scenarios(config, args.scenario):
            result = run_scenario(_restrict_outputs(sc, keep), out_dir,
                                  figure_format=args.format)
            results.append(result)
            print(f"{sc.name}: {result.outcome} "
                  f"({len(result.trajectory.crossings)} crossings)")
        return _exit_code(results)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
