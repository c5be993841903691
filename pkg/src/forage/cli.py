"""Command-line front end.

    forage simulate   --seed 7 --heuristic hl --case b --trace --out out/
    forage experiment --heuristic hl,random,invite --case a --runs 500 --seed 42
    forage validate   --config my.json

Every configuration field also has its own flag (``--robot-count 40``,
``--prey-composition '[[50, 120]]'``...). Precedence is command line, then
config file, then built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import fields
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .config import CASE_ALIASES, HEURISTIC_ALIASES, ConfigError, SimConfig
from .engine import SetupError, run_simulation
from .export import export_runs
from .harness import CellError, CellResult, ExperimentPlan, monte_carlo, run_tasks
from .metrics import aggregate_runs

log = logging.getLogger("forage")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

# Config fields set through dedicated flags instead of the generic per-field ones.
_SPECIAL = {"heuristic", "spawn_case"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; configuration problems are exit 1 here
    def error(self, message):
        raise UsageError(message)


def _field_flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_argument_group("configuration overrides")
    for f in fields(SimConfig):
        if f.name in _SPECIAL:
            continue
        group.add_argument(_field_flag(f.name), dest=f"cfg_{f.name}", metavar="VALUE", default=None)


def _coerce(name: str, raw: str) -> Any:
    default = getattr(SimConfig(), name)
    try:
        if name == "prey_composition":
            value = json.loads(raw)
            if not isinstance(value, list):
                raise ValueError("expected a JSON list of [content, count] pairs")
            return value
        if isinstance(default, bool):
            raise ValueError("boolean fields are not supported")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"invalid value {raw!r} for {name}: {exc}", name) from None
    return raw


def _split(raw: str, table: dict, key: str) -> list:
    out = []
    for item in raw.split(","):
        item = item.strip().lower()
        if item not in table:
            raise ConfigError(f"unknown {key} {item!r}; choose from {', '.join(table)}", key)
        out.append(table[item])
    return out


def resolve_config(args: argparse.Namespace) -> SimConfig:
    cfg = SimConfig.load(args.config) if args.config else SimConfig()
    overrides = {}
    for f in fields(SimConfig):
        raw = getattr(args, f"cfg_{f.name}", None)
        if raw is not None:
            overrides[f.name] = _coerce(f.name, raw)
    if getattr(args, "heuristic", None):
        overrides["heuristic"] = _split(args.heuristic, HEURISTIC_ALIASES, "heuristic")[0]
    if getattr(args, "case", None):
        overrides["spawn_case"] = _split(args.case, CASE_ALIASES, "spawn_case")[0]
    try:
        cfg = cfg.with_overrides(**overrides)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def _default_seed() -> int:
    raw = os.environ.get("FORAGE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"FORAGE_SEED must be an integer, got {raw!r}", "FORAGE_SEED") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="forage", description="Swarm foraging simulator")
    parser.add_argument("--version", action="version", version=f"forage {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="run a single simulation")
    sim.add_argument("--config", type=Path)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--heuristic", help="hl, random or invite")
    sim.add_argument("--case", help="a (two corners) or b (four corners)")
    sim.add_argument("--trace", action="store_true", help="write per-tick robot states to trace.jsonl")
    sim.add_argument("--out", type=Path, default=Path("out"))
    _add_config_flags(sim)

    exp = sub.add_parser("experiment", help="run the Monte Carlo grid")
    exp.add_argument("--config", type=Path)
    exp.add_argument("--seed", type=int)
    exp.add_argument("--heuristic", default="hl,random,invite", help="comma-separated list")
    exp.add_argument("--case", default="a,b", help="comma-separated list")
    exp.add_argument("--runs", type=int, default=500)
    exp.add_argument("--workers", type=int, default=1)
    exp.add_argument("--out", type=Path, default=Path("out"))
    _add_config_flags(exp)

    val = sub.add_parser("validate", help="check a config file and print the resolved configuration")
    val.add_argument("config", nargs="?", type=Path)
    val.add_argument("--config", dest="config_flag", type=Path)
    val.add_argument("--heuristic")
    val.add_argument("--case")
    _add_config_flags(val)
    return parser


def _manifest(args: argparse.Namespace, cfg: SimConfig, seed: int, **extra) -> dict:
    return {
        "command": args.command,
        "base_seed": seed,
        "config": cfg.to_dict(),
        "config_digest": cfg.digest(),
        "seed_derivation": "splitmix64 fold of (base_seed, heuristic_index, case_index, run_index); "
        "layout seed folds (LAYOUT tag, base_seed, case_index, run_index)",
        **extra,
    }


def cmd_validate(args) -> int:
    args.config = args.config or args.config_flag
    cfg = resolve_config(args)
    sys.stdout.write(cfg.to_json())
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = resolve_config(args)
    seed = args.seed if args.seed is not None else _default_seed()
    plan = ExperimentPlan(cfg, (cfg.heuristic,), (cfg.spawn_case,), runs_per_cell=1, base_seed=seed)
    task = run_tasks(plan, (cfg.heuristic, cfg.spawn_case))[0]
    args.out.mkdir(parents=True, exist_ok=True)
    try:
        if args.trace:
            with open(args.out / "trace.jsonl", "w", encoding="utf-8", newline="\n") as fh:
                record = run_simulation(cfg, task.seed, task.layout_seed, trace=fh)
        else:
            record = run_simulation(cfg, task.seed, task.layout_seed)
    except SetupError as exc:
        raise CellError(f"run seed {task.seed} (layout seed {task.layout_seed}): {exc}") from exc
    cell = CellResult(cfg.heuristic, cfg.spawn_case, [record], aggregate_runs([record]))
    export_runs([cell], args.out, _manifest(args, cfg, seed, run_seed=task.seed,
                                              layout_seed=task.layout_seed, trace=args.trace))
    print(f"{cfg.heuristic.value}/{cfg.spawn_case.value} seed {task.seed}: "
          f"{record.percent_removed:.2f}% removed, invite ticks {record.invite_ticks}, "
          f"nu {'undefined' if record.nu is None else f'{record.nu:.3f}'}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = resolve_config(args)
    heuristics = tuple(_split(args.heuristic, HEURISTIC_ALIASES, "heuristic"))
    cases = tuple(_split(args.case, CASE_ALIASES, "spawn_case"))
    # validate every cell up front: divisibility depends on the spawn case
    for c in cases:
        cfg.with_overrides(spawn_case=c).validate()
    seed = args.seed if args.seed is not None else _default_seed()
    if args.runs < 1:
        raise ConfigError("--runs must be at least 1", "runs")
    if args.workers < 1:
        raise ConfigError("--workers must be at least 1", "workers")
    plan = ExperimentPlan(cfg, heuristics, cases, args.runs, seed, args.workers)
    results = monte_carlo(plan)
    export_runs(results, args.out, _manifest(
        args, cfg, seed,
        runs_per_cell=args.runs,
        cells=[[h.value, c.value] for h, c in plan.cells()],
    ))
    for cell in results:
        s = cell.stats
        nu = "undefined" if s.nu_median is None else f"{s.nu_median:.3f}"
        print(f"{cell.heuristic.value:>17} {cell.spawn_case.value:<11} runs {s.runs:4d}  "
              f"median removed {s.percent_median:6.2f}%  >=50%: {s.runs_half_removed:4d}  median nu {nu}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"forage: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"simulate": cmd_simulate, "experiment": cmd_experiment, "validate": cmd_validate}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        key = f" [{exc.key}]" if exc.key else ""
        print(f"forage: configuration error{key}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SetupError, CellError, OSError) as exc:
        print(f"forage: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
