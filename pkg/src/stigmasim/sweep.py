"""Replicated (theta, q0) grid experiments with deterministic per-run seeds."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .config import SimConfig
from .engine import run_sim
from .errors import ConfigError
from .metrics import MetricsReport, compute_report, fairness_indicator, format_value

DEFAULT_THETA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_Q0_GRID = (0.5, 0.8)
DEFAULT_EPS_TOLS = (0.1, 0.5, 1.0, 2.0)


def derive_seed(master_seed: int, *key: int) -> int:
    """Child seed for a grid position, stable under any execution order."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SweepConfig:
    theta_grid: tuple = DEFAULT_THETA_GRID
    q0_grid: tuple = DEFAULT_Q0_GRID
    replicates: int = 60
    base: SimConfig = field(default_factory=SimConfig)
    eps_tols: tuple = DEFAULT_EPS_TOLS
    master_seed: int = 0

    def validate(self) -> None:
        if not self.theta_grid:
            raise ConfigError("theta_grid", "must list at least one value")
        for v in self.theta_grid:
            if not 0.0 <= v <= 1.0:
                raise ConfigError("theta_grid", f"values must lie in [0, 1], got {v}")
        if not self.q0_grid:
            raise ConfigError("q0_grid", "must list at least one value")
        for v in self.q0_grid:
            if not 0.0 <= v <= 1.0:
                raise ConfigError("q0_grid", f"values must lie in [0, 1], got {v}")
        if self.replicates < 1:
            raise ConfigError("replicates", f"must be >= 1, got {self.replicates}")
        if not self.eps_tols:
            raise ConfigError("eps_tols", "must list at least one tolerance")
        for v in self.eps_tols:
            if not v > 0:
                raise ConfigError("eps_tols", f"tolerances must be positive, got {v}")
        if self.master_seed < 0:
            raise ConfigError("master_seed", f"must be >= 0, got {self.master_seed}")
        self.base.validate()

    def to_json(self) -> dict:
        return {
            "theta_grid": list(self.theta_grid),
            "q0_grid": list(self.q0_grid),
            "replicates": self.replicates,
            "eps_tols": list(self.eps_tols),
            "master_seed": self.master_seed,
            "base": self.base.to_json(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SweepConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config", f"expected a JSON object, got {type(doc).__name__}")
        if "theta_grid" not in doc:
            raise ConfigError("theta_grid", "required: list the theta values to sweep")
        known = set(cls.__dataclass_fields__)
        fields = {}
        for key, value in doc.items():
            if key not in known:
                raise ConfigError(key, "unknown configuration field")
            fields[key] = value
        if "base" in fields:
            fields["base"] = SimConfig.from_json(fields["base"])
        for key in ("theta_grid", "q0_grid", "eps_tols"):
            if key in fields:
                fields[key] = tuple(fields[key])
        cfg = cls(**fields)
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class SweepRecord:
    theta: float
    q0: float
    replicate: int
    seed: int
    report: MetricsReport
    fair_a: dict
    fair_p: dict


@dataclass(frozen=True)
class CellSummary:
    theta: float
    q0: float
    replicates: int
    tau1_a_mean: Optional[float]
    tau1_a_sd: Optional[float]
    tau1_a_nulls: int
    tau1_p_mean: Optional[float]
    tau1_p_sd: Optional[float]
    tau1_p_nulls: int
    arrest_ratio_mean: Optional[float]
    fair_a: dict
    fair_p: dict


@dataclass(frozen=True)
class SweepSummary:
    eps_tols: tuple
    cells: tuple


def _replicate_report(cfg: SimConfig) -> MetricsReport:
    log, _ = run_sim(cfg)
    return compute_report(log, cfg.n_per_group)


def _collect(iterator, total: int, progress: Optional[Callable]) -> list:
    out = []
    for item in iterator:
        out.append(item)
        if progress is not None:
            progress(len(out), total)
    return out


def run_sweep(config: SweepConfig, workers: int = 1,
              progress: Optional[Callable] = None) -> list:
    """One record per (theta, q0, replicate), ordered by grid position.

    Worker count changes wall time only; seeds are bound to grid positions
    up front so the record list is identical for any level of parallelism.
    """
    config.validate()
    cells = []
    for ti, theta in enumerate(config.theta_grid):
        for qi, q0 in enumerate(config.q0_grid):
            for rep in range(config.replicates):
                seed = derive_seed(config.master_seed, ti, qi, rep)
                try:
                    cfg = config.base.with_overrides(
                        stigma_follow=theta, cop_bias=q0, seed=seed)
                except ConfigError as exc:
                    raise ConfigError(
                        exc.field,
                        f"theta={theta} q0={q0} replicate={rep}: {exc}") from exc
                cells.append((theta, q0, rep, seed, cfg))
    configs = [cell[4] for cell in cells]
    if workers > 1:
        chunk = max(1, len(configs) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = _collect(pool.map(_replicate_report, configs, chunksize=chunk),
                               len(configs), progress)
    else:
        reports = _collect(map(_replicate_report, configs), len(configs), progress)
    records = []
    for (theta, q0, rep, seed, _), report in zip(cells, reports):
        records.append(SweepRecord(
            theta=theta, q0=q0, replicate=rep, seed=seed, report=report,
            fair_a={tol: fairness_indicator(report.tau1_a, tol)
                    for tol in config.eps_tols},
            fair_p={tol: fairness_indicator(report.tau1_p, tol)
                    for tol in config.eps_tols},
        ))
    return records


def _mean_sd(values: list) -> tuple[Optional[float], Optional[float], int]:
    present = [v for v in values if v is not None]
    nulls = len(values) - len(present)
    mean = float(np.mean(present)) if present else None
    sd = float(np.std(present, ddof=1)) if len(present) > 1 else None
    return mean, sd, nulls


def summarize(records: list, eps_tols: tuple = DEFAULT_EPS_TOLS) -> SweepSummary:
    """Per-cell means and spreads. Null outcomes are dropped from means and
    standard deviations (their count is kept) but score 0 in fair proportions,
    which run over every replicate."""
    if not records:
        raise ValueError("no records to summarize")
    order = []
    groups: dict = {}
    for rec in records:
        key = (rec.theta, rec.q0)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(rec)
    cells = []
    for theta, q0 in order:
        recs = groups[(theta, q0)]
        a_mean, a_sd, a_nulls = _mean_sd([r.report.tau1_a for r in recs])
        p_mean, p_sd, p_nulls = _mean_sd([r.report.tau1_p for r in recs])
        ar_mean, _, _ = _mean_sd([r.report.arrest_ratio for r in recs])
        n = len(recs)
        fair_a = {tol: sum(fairness_indicator(r.report.tau1_a, tol) for r in recs) / n
                  for tol in eps_tols}
        fair_p = {tol: sum(fairness_indicator(r.report.tau1_p, tol) for r in recs) / n
                  for tol in eps_tols}
        cells.append(CellSummary(
            theta=theta, q0=q0, replicates=n,
            tau1_a_mean=a_mean, tau1_a_sd=a_sd, tau1_a_nulls=a_nulls,
            tau1_p_mean=p_mean, tau1_p_sd=p_sd, tau1_p_nulls=p_nulls,
            arrest_ratio_mean=ar_mean, fair_a=fair_a, fair_p=fair_p))
    return SweepSummary(eps_tols=tuple(eps_tols), cells=tuple(cells))


def outcome_columns(eps_tols: tuple) -> list:
    cols = ["theta", "q0", "replicate", "seed",
            "tau1_a", "tau1_p", "tau_a", "tau_p", "arrest_ratio"]
    for tol in eps_tols:
        cols.append(f"Y_a_{tol:g}")
        cols.append(f"Y_p_{tol:g}")
    return cols


def export_outcomes(records: list, path, eps_tols: tuple = DEFAULT_EPS_TOLS) -> None:
    """Final-tick outcomes, one row per replicate. Null metrics serialize as
    empty fields; floats use round-trip repr."""
    lines = [",".join(outcome_columns(eps_tols))]
    for rec in records:
        rep = rec.report
        row = [format_value(rec.theta), format_value(rec.q0),
               str(rec.replicate), str(rec.seed),
               format_value(rep.tau1_a), format_value(rep.tau1_p),
               format_value(rep.tau_a), format_value(rep.tau_p),
               format_value(rep.arrest_ratio)]
        for tol in eps_tols:
            row.append(str(fairness_indicator(rep.tau1_a, tol)))
            row.append(str(fairness_indicator(rep.tau1_p, tol)))
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def summary_columns(eps_tols: tuple) -> list:
    cols = ["theta", "q0", "replicates",
            "tau1_a_mean", "tau1_a_sd", "tau1_a_nulls",
            "tau1_p_mean", "tau1_p_sd", "tau1_p_nulls",
            "arrest_ratio_mean"]
    for tol in eps_tols:
        cols.append(f"fair_a_{tol:g}")
        cols.append(f"fair_p_{tol:g}")
    return cols


def export_summary(summary: SweepSummary, path) -> None:
    lines = [",".join(summary_columns(summary.eps_tols))]
    for cell in summary.cells:
        row = [format_value(cell.theta), format_value(cell.q0),
               str(cell.replicates),
               format_value(cell.tau1_a_mean), format_value(cell.tau1_a_sd),
               str(cell.tau1_a_nulls),
               format_value(cell.tau1_p_mean), format_value(cell.tau1_p_sd),
               str(cell.tau1_p_nulls),
               format_value(cell.arrest_ratio_mean)]
        for tol in summary.eps_tols:
            row.append(format_value(cell.fair_a[tol]))
            row.append(format_value(cell.fair_p[tol]))
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
