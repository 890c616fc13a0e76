"""Command line entry point: simulate, sweep, and bandit subcommands."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .bandit import BanditConfig, run_bandit, write_actions_csv, write_reward_csv
from .config import SimConfig
from .engine import run_sim
from .errors import ConfigError, DataIntegrityError
from .manifest import build_manifest, read_config_doc, write_manifest
from .metrics import time_series, write_report_csv
from .sweep import SweepConfig, export_outcomes, export_summary, run_sweep, summarize


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stigmasim",
        description="Agent-based arrest dynamics: single runs, parameter "
                    "sweeps, and an epsilon-greedy policy search.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", metavar="PATH",
                        help="JSON config, or a manifest.json from a previous run")
        sp.add_argument("--out", metavar="DIR", default="out",
                        help="output directory (default: out)")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the master seed")
        sp.add_argument("--workers", type=int, default=None,
                        help="parallel worker count (default: all processors)")
        sp.add_argument("--fast", action="store_true",
                        help="CI profile: 1000-tick runs, 30 replicates")

    sim = sub.add_parser("simulate",
                         help="one run: event log plus metrics time series")
    add_common(sim)
    sim.add_argument("--measure-every", type=int, default=None, metavar="T",
                     help="metrics cadence in ticks (default: 50)")

    swp = sub.add_parser("sweep", help="replicated theta x q0 grid")
    add_common(swp)

    ban = sub.add_parser("bandit", help="epsilon-greedy search over theta")
    add_common(ban)
    return parser


def _load_doc(args, subcommand: str) -> tuple:
    if args.config is None:
        return None, {}
    doc, manifest_cmd, extras = read_config_doc(args.config)
    if manifest_cmd is not None and manifest_cmd != subcommand:
        raise ConfigError(
            "subcommand",
            f"manifest was written by '{manifest_cmd}', not '{subcommand}'")
    return doc, extras


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _workers(args) -> int:
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("workers", f"must be >= 1, got {args.workers}")
        return args.workers
    return os.cpu_count() or 1


def _progress(done: int, total: int) -> None:
    step = max(1, total // 10)
    if done == total or done % step == 0:
        print(f"stigmasim: {done}/{total} done", file=sys.stderr)


def _cmd_simulate(args) -> int:
    doc, extras = _load_doc(args, "simulate")
    cfg = SimConfig.from_json(doc) if doc is not None else SimConfig()
    if args.seed is not None:
        cfg = cfg.with_overrides(seed=args.seed)
    if args.fast:
        cfg = cfg.with_overrides(max_ticks=1000)
    measure_every = args.measure_every
    if measure_every is None:
        measure_every = extras.get("measure_every", 50)
    if not isinstance(measure_every, int) or measure_every < 1:
        raise ConfigError("measure_every",
                          f"must be a tick interval >= 1, got {measure_every}")
    out = _out_dir(args)
    log, _ = run_sim(cfg)
    ticks, reports = time_series(log, cfg.n_per_group, measure_every, cfg.max_ticks)
    log.to_csv(out / "events.csv")
    write_report_csv(out / "metrics.csv", reports, ticks)
    manifest = build_manifest("simulate", cfg.to_json(), cfg.seed, out,
                              ["events.csv", "metrics.csv"],
                              {"measure_every": measure_every})
    write_manifest(out / "manifest.json", manifest)
    return 0


def _cmd_sweep(args) -> int:
    doc, _ = _load_doc(args, "sweep")
    cfg = SweepConfig.from_json(doc) if doc is not None else SweepConfig()
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if args.fast:
        cfg = replace(cfg, replicates=30,
                      base=cfg.base.with_overrides(max_ticks=1000))
    cfg.validate()
    out = _out_dir(args)
    records = run_sweep(cfg, workers=_workers(args), progress=_progress)
    export_outcomes(records, out / "outcomes.csv", cfg.eps_tols)
    export_summary(summarize(records, cfg.eps_tols), out / "summary.csv")
    manifest = build_manifest("sweep", cfg.to_json(), cfg.master_seed, out,
                              ["outcomes.csv", "summary.csv"])
    write_manifest(out / "manifest.json", manifest)
    return 0


def _cmd_bandit(args) -> int:
    doc, _ = _load_doc(args, "bandit")
    cfg = BanditConfig.from_json(doc) if doc is not None else BanditConfig()
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if args.fast:
        cfg = replace(cfg, episode=cfg.episode.with_overrides(max_ticks=1000))
    cfg.validate()
    out = _out_dir(args)
    result = run_bandit(cfg, workers=_workers(args), progress=_progress)
    write_reward_csv(result, out / "bandit_reward.csv")
    write_actions_csv(result, out / "bandit_actions.csv")
    manifest = build_manifest("bandit", cfg.to_json(), cfg.master_seed, out,
                              ["bandit_reward.csv", "bandit_actions.csv"])
    write_manifest(out / "manifest.json", manifest)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_bandit(args)
    except ConfigError as exc:
        print(f"stigmasim: configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, DataIntegrityError) as exc:
        print(f"stigmasim: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
