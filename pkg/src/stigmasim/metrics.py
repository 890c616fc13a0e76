"""Fairness metrics over an event log.

Two views of the same confusion counts:

* A-conditioned ("_a"): rates among arrest events only. Because the judge and
  the recidivism draw are independent coin flips, these converge to the same
  constants for both groups no matter how unevenly policing is distributed.
* Population ("_p"): rates over a record set holding every arrest event plus
  one synthetic all-zero record (no arrest, J=0, R=0) per individual who was
  never arrested. Policing intensity now enters through the denominator, which
  is the whole point of the comparison.

Any metric whose denominator is zero is None, never a coerced 0/0; the
aggregate measures (tau, tau1, arrest_ratio) are None whenever an input is
None or the group-2 reference value is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .engine import EventLog
from .errors import DataIntegrityError, IdentityNotApplicableError


@dataclass(frozen=True)
class GroupTable:
    """Confusion counts for one group, events counted per-event."""

    group: int
    tp: int
    fp: int
    fn: int
    tn: int
    never_arrested: int

    @property
    def events(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class GroupMetrics:
    group: int
    events: int
    never_arrested: int
    ppv_a: Optional[float]
    fpr_a: Optional[float]
    fnr_a: Optional[float]
    prevalence_a: Optional[float]
    ppv_p: Optional[float]
    fpr_p: Optional[float]
    fnr_p: Optional[float]
    prevalence_p: Optional[float]
    arrest_prob: Optional[float]


@dataclass(frozen=True)
class MetricsReport:
    g1: GroupMetrics
    g2: GroupMetrics
    tau_a: Optional[float]
    tau_p: Optional[float]
    tau1_a: Optional[float]
    tau1_p: Optional[float]
    arrest_ratio: Optional[float]


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den > 0 else None


def tabulate(events: EventLog, n_per_group: int) -> tuple[GroupTable, GroupTable]:
    """Count (J, R) cells per group plus never-arrested individuals.

    Events count per-event: an agent arrested k times contributes k records
    and is excluded from never_arrested.
    """
    arr = events.array
    if len(arr) and (arr[:, 1].min() < 0 or arr[:, 1].max() >= 2 * n_per_group):
        bad = arr[:, 1][(arr[:, 1] < 0) | (arr[:, 1] >= 2 * n_per_group)][0]
        raise DataIntegrityError(f"event references unknown agent_id {int(bad)}")
    tables = []
    for g in (1, 2):
        rows = arr[arr[:, 2] == g]
        j = rows[:, 5]
        r = rows[:, 6]
        arrested_ids = np.unique(rows[:, 1])
        tables.append(GroupTable(
            group=g,
            tp=int(np.sum((j == 1) & (r == 1))),
            fp=int(np.sum((j == 1) & (r == 0))),
            fn=int(np.sum((j == 0) & (r == 1))),
            tn=int(np.sum((j == 0) & (r == 0))),
            never_arrested=n_per_group - len(arrested_ids),
        ))
    return tables[0], tables[1]


def arrest_metrics(table: GroupTable) -> tuple[Optional[float], Optional[float], Optional[float], Optional[float]]:
    """(ppv_a, fpr_a, fnr_a, prevalence_a) among arrest events."""
    return (
        _ratio(table.tp, table.tp + table.fp),
        _ratio(table.fp, table.fp + table.tn),
        _ratio(table.fn, table.tp + table.fn),
        _ratio(table.tp + table.fn, table.events),
    )


def population_metrics(table: GroupTable) -> tuple[Optional[float], Optional[float], Optional[float], Optional[float], Optional[float]]:
    """(ppv_p, fpr_p, fnr_p, prevalence_p, arrest_prob) over the augmented
    record set: one synthetic (A=0, J=0, R=0) record per never-arrested
    individual. ppv_p equals ppv_a identically; fnr_p equals fnr_a because
    the synthetic records add no true recidivists."""
    total = table.events + table.never_arrested
    prev_a = _ratio(table.tp + table.fn, table.events)
    a_prob = _ratio(table.events, total)
    if prev_a is not None:
        # As a product so the decomposition prevalence_p = prevalence_a *
        # arrest_prob holds bitwise, not just mathematically.
        prev_p = prev_a * a_prob
    else:
        prev_p = _ratio(table.tp + table.fn, total)
    return (
        _ratio(table.tp, table.tp + table.fp),
        _ratio(table.fp, table.fp + table.tn + table.never_arrested),
        _ratio(table.fn, table.tp + table.fn),
        prev_p,
        a_prob,
    )


def group_metrics(table: GroupTable) -> GroupMetrics:
    ppv_a, fpr_a, fnr_a, prev_a = arrest_metrics(table)
    ppv_p, fpr_p, fnr_p, prev_p, a_prob = population_metrics(table)
    return GroupMetrics(
        group=table.group, events=table.events, never_arrested=table.never_arrested,
        ppv_a=ppv_a, fpr_a=fpr_a, fnr_a=fnr_a, prevalence_a=prev_a,
        ppv_p=ppv_p, fpr_p=fpr_p, fnr_p=fnr_p, prevalence_p=prev_p,
        arrest_prob=a_prob,
    )


def tau(ppv1, fpr1, fnr1, ppv2, fpr2, fnr2) -> Optional[float]:
    """Sum of absolute deviations of the three group-1/group-2 metric ratios
    from 1. None if any input is None or a group-2 reference is zero."""
    vals = (ppv1, fpr1, fnr1, ppv2, fpr2, fnr2)
    if any(v is None for v in vals) or ppv2 == 0 or fpr2 == 0 or fnr2 == 0:
        return None
    return abs(1 - ppv1 / ppv2) + abs(1 - fpr1 / fpr2) + abs(1 - fnr1 / fnr2)


def tau1(fpr_g1: Optional[float], fpr_g2: Optional[float]) -> Optional[float]:
    """Signed single-term variant: 1 - FPR(G1)/FPR(G2)."""
    if fpr_g1 is None or fpr_g2 is None or fpr_g2 == 0:
        return None
    return 1 - fpr_g1 / fpr_g2


def arrest_ratio(table_g1: GroupTable, table_g2: GroupTable) -> Optional[float]:
    return _ratio(table_g1.events, table_g2.events) if table_g2.events else None


def identity_check(ppv, fpr, fnr, prevalence) -> float:
    """Residual of FPR = [p/(1-p)] * [(1-PPV)/PPV] * (1-FNR).

    On counts from a single contingency table this is an algebraic identity,
    so the residual is zero up to float rounding. Raises when undefined.
    """
    vals = (ppv, fpr, fnr, prevalence)
    if any(v is None for v in vals):
        raise IdentityNotApplicableError("all four metrics must be defined")
    if ppv <= 0:
        raise IdentityNotApplicableError(f"requires PPV > 0, got {ppv}")
    if prevalence >= 1:
        raise IdentityNotApplicableError(f"requires prevalence < 1, got {prevalence}")
    return fpr - (prevalence / (1 - prevalence)) * ((1 - ppv) / ppv) * (1 - fnr)


def fairness_indicator(tau1_value: Optional[float], eps_tol: float) -> int:
    """1 iff tau1 is defined and strictly inside the tolerance. An undefined
    tau1 counts as unfair."""
    if tau1_value is None:
        return 0
    return 1 if abs(tau1_value) < eps_tol else 0


def compute_report(events: EventLog, n_per_group: int) -> MetricsReport:
    t1, t2 = tabulate(events, n_per_group)
    m1 = group_metrics(t1)
    m2 = group_metrics(t2)
    return MetricsReport(
        g1=m1,
        g2=m2,
        tau_a=tau(m1.ppv_a, m1.fpr_a, m1.fnr_a, m2.ppv_a, m2.fpr_a, m2.fnr_a),
        tau_p=tau(m1.ppv_p, m1.fpr_p, m1.fnr_p, m2.ppv_p, m2.fpr_p, m2.fnr_p),
        tau1_a=tau1(m1.fpr_a, m2.fpr_a),
        tau1_p=tau1(m1.fpr_p, m2.fpr_p),
        arrest_ratio=arrest_ratio(t1, t2),
    )


# --- serialization -----------------------------------------------------------

_GROUP_FIELDS = ("events", "never_arrested", "ppv_a", "fpr_a", "fnr_a",
                 "prevalence_a", "ppv_p", "fpr_p", "fnr_p", "prevalence_p",
                 "arrest_prob")
_GLOBAL_FIELDS = ("tau_a", "tau_p", "tau1_a", "tau1_p", "arrest_ratio")

REPORT_COLUMNS = tuple(
    [f"{f}_g{g}" for g in (1, 2) for f in _GROUP_FIELDS] + list(_GLOBAL_FIELDS)
)


def format_value(v) -> str:
    """Empty string for None, shortest round-trip repr for floats."""
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def report_row(report: MetricsReport) -> list:
    row = []
    for g in (report.g1, report.g2):
        row.extend(getattr(g, f) for f in _GROUP_FIELDS)
    row.extend(getattr(report, f) for f in _GLOBAL_FIELDS)
    return row


def report_to_json(report: MetricsReport) -> dict:
    return dict(zip(REPORT_COLUMNS, report_row(report)))


def write_report_csv(path, reports: list, ticks: list) -> None:
    """Time-series CSV: one row per measurement tick, cumulative counts."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(("tick",) + REPORT_COLUMNS) + "\n")
        for tick, rep in zip(ticks, reports):
            vals = [str(tick)] + [format_value(v) for v in report_row(rep)]
            fh.write(",".join(vals) + "\n")


def time_series(events: EventLog, n_per_group: int, every: int,
                max_ticks: int) -> tuple[list, list]:
    """Reports on cumulative event prefixes at ticks every, 2*every, ...,
    always including the final tick. Returns (ticks, reports)."""
    if every < 1:
        raise ValueError(f"measurement cadence must be >= 1, got {every}")
    points = list(range(every, max_ticks + 1, every))
    if not points or points[-1] != max_ticks:
        points.append(max_ticks)
    reports = [compute_report(events.up_to(t), n_per_group) for t in points]
    return points, reports
