"""Command-line front end: run scenarios, replay reports, list presets."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .errors import SimulationError
from .harness import (
    PRESET_NOTES,
    PRESETS,
    ScenarioConfig,
    emit_report,
    replay,
    run_scenario,
    transcripts_path,
)


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SimulationError(f"could not read config from {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SimulationError(f"config at {path!r} is not valid JSON: {exc}") from exc


def _cmd_run(args: argparse.Namespace) -> int:
    if (args.config is None) == (args.preset is None):
        print("run needs exactly one of --config or --preset", file=sys.stderr)
        return 2
    if args.preset is not None:
        if args.preset not in PRESETS:
            print(f"unknown preset {args.preset!r}; try 'presets list'", file=sys.stderr)
            return 2
        cfg = PRESETS[args.preset]
    else:
        cfg = ScenarioConfig.from_dict(_load_config_file(args.config))
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if overrides:
        import dataclasses

        cfg = dataclasses.replace(cfg, **overrides)
        cfg.validate()

    summary = run_scenario(cfg)
    print(f"protocol: {cfg.protocol} ({cfg.variant}), dim {cfg.dim}, seed {cfg.seed}, trials {cfg.trials}")
    for key in sorted(summary.aggregates):
        print(f"{key}: {summary.aggregates[key]}")
    if args.out is not None:
        emit_report(summary, args.out)
        print(f"report written: {args.out}")
        print(f"transcripts written: {transcripts_path(args.out)}")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    ok, diffs = replay(args.report)
    if ok:
        print(f"replay ok: {args.report} reproduces exactly")
        return 0
    print(f"replay mismatch: {args.report}")
    for line in diffs:
        print(f"  {line}")
    return 1


def _cmd_presets(args: argparse.Namespace) -> int:
    # Only one action today, but parsed as a positional so the command
    # reads naturally.
    for name in PRESETS:
        print(f"{name}: {PRESET_NOTES[name]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsqcsim",
        description="Exact simulator for deterministic secure communication over qudit channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario from a config file or preset")
    run_p.add_argument("--config", help="path to a JSON scenario config")
    run_p.add_argument("--preset", help="name of a built-in scenario")
    run_p.add_argument("--seed", type=int, help="override the master seed")
    run_p.add_argument("--trials", type=int, help="override the trial count")
    run_p.add_argument("--out", help="write the JSON report (and transcript sidecar) here")
    run_p.set_defaults(handler=_cmd_run)

    replay_p = sub.add_parser("replay", help="re-run a report's config and verify it reproduces")
    replay_p.add_argument("--report", required=True, help="path to a report written by run --out")
    replay_p.set_defaults(handler=_cmd_replay)

    presets_p = sub.add_parser("presets", help="inspect built-in scenarios")
    presets_p.add_argument("action", choices=["list"], help="what to do with the presets")
    presets_p.set_defaults(handler=_cmd_presets)
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
