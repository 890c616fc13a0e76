"""The seven figure builders.

Each takes parsed CSV rows (see io.load_rows) and returns a matplotlib
Figure; the CLI decides where and at what resolution to save it. Builders
raise EmptyDataError when there is nothing plottable, never silently
producing a blank image.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from matplotlib import pyplot as plt
from scipy.stats import gaussian_kde

from .io import EmptyDataError, column

ARRESTED_COLOR = "tab:red"
POPULATION_COLOR = "tab:blue"


def _finite(values) -> list[float]:
    return [v for v in values if v is not None and np.isfinite(v)]


def _series(rows, x_name, y_name):
    pts = [(x, y) for x, y in zip(column(rows, x_name), column(rows, y_name))
           if x is not None and y is not None]
    return ([p[0] for p in pts], [p[1] for p in pts])


def tau_series(frames: list) -> plt.Figure:
    """Disparity scores over time: tau_a dashed, tau_p solid, one color per
    input file. frames is a list of (label, rows) pairs."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    plotted = False
    for i, (label, rows) in enumerate(frames):
        prefix = f"{label}: " if len(frames) > 1 else ""
        for name, style, suffix in (("tau_a", "--", "arrested"),
                                    ("tau_p", "-", "population")):
            xs, ys = _series(rows, "tick", name)
            if not xs:
                continue
            ax.plot(xs, ys, style, color=f"C{i}", label=f"{prefix}{suffix}")
            plotted = True
    if not plotted:
        raise EmptyDataError("no defined tau values in any input")
    ax.set_xlabel("tick")
    ax.set_ylabel("tau")
    ax.axhline(0.0, color="0.7", lw=0.8, zorder=0)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def arrest_ratio(frames: list) -> plt.Figure:
    """Group-1 to group-2 arrest count ratio over time, one line per input."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    plotted = False
    for i, (label, rows) in enumerate(frames):
        xs, ys = _series(rows, "tick", "arrest_ratio")
        if not xs:
            continue
        ax.plot(xs, ys, color=f"C{i}", label=label if len(frames) > 1 else None)
        plotted = True
    if not plotted:
        raise EmptyDataError("no defined arrest_ratio values in any input")
    ax.axhline(1.0, color="0.7", lw=0.8, zorder=0)
    ax.set_xlabel("tick")
    ax.set_ylabel("arrest ratio (G1 / G2)")
    if len(frames) > 1:
        ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _panel_density(ax, values: list[float], color: str, label: str,
                   bandwidth: Optional[float]) -> bool:
    distinct = sorted(set(values))
    if len(distinct) >= 2:
        lo, hi = distinct[0], distinct[-1]
        pad = 0.15 * (hi - lo)
        xs = np.linspace(lo - pad, hi + pad, 200)
        kde = gaussian_kde(values, bw_method=bandwidth)
        ax.plot(xs, kde(xs), color=color, label=label)
        ax.fill_between(xs, kde(xs), color=color, alpha=0.15)
        return True
    if len(distinct) == 1:
        # point mass; a KDE is undefined, mark the location instead
        ax.axvline(distinct[0], color=color, label=label)
        return True
    return False


def outcome_density(rows: list, bandwidth: Optional[float] = None) -> plt.Figure:
    """Grid of outcome densities: one row per q0, one column per theta, with
    the arrested and population signed disparities overlaid in each panel."""
    thetas = sorted({float(r["theta"]) for r in rows})
    q0s = sorted({float(r["q0"]) for r in rows})
    fig, axes = plt.subplots(len(q0s), len(thetas),
                             figsize=(2.6 * len(thetas), 2.3 * len(q0s)),
                             squeeze=False)
    plotted = False
    for i, q0 in enumerate(q0s):
        for j, theta in enumerate(thetas):
            ax = axes[i][j]
            cell = [r for r in rows
                    if float(r["q0"]) == q0 and float(r["theta"]) == theta]
            drew = _panel_density(ax, _finite(column(cell, "tau1_a")),
                                  ARRESTED_COLOR, "arrested", bandwidth)
            drew |= _panel_density(ax, _finite(column(cell, "tau1_p")),
                                   POPULATION_COLOR, "population", bandwidth)
            if not drew:
                ax.text(0.5, 0.5, "no data", transform=ax.transAxes,
                        ha="center", va="center", fontsize=8, color="0.5")
            else:
                plotted = True
            if i == 0:
                ax.set_title(f"theta={theta:g}", fontsize=9)
            if j == 0:
                ax.set_ylabel(f"q0={q0:g}")
            ax.tick_params(labelsize=7)
    if not plotted:
        raise EmptyDataError("no defined outcomes in any (theta, q0) cell")
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    return fig


def _cell_means(rows: list, name: str) -> dict:
    out = {}
    for r in rows:
        key = (float(r["q0"]), float(r["theta"]))
        out.setdefault(key, []).append(float(r[name]) if r[name] != "" else None)
    return {k: (float(np.mean(_finite(v))) if _finite(v) else None)
            for k, v in out.items()}


def outcome_means(rows: list) -> plt.Figure:
    """Left: mean population disparity against theta, one line per q0.
    Right: gap between the population and arrested means."""
    p_means = _cell_means(rows, "tau1_p")
    a_means = _cell_means(rows, "tau1_a")
    q0s = sorted({k[0] for k in p_means})
    thetas = sorted({k[1] for k in p_means})
    fig, (left, right) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    plotted = False
    for idx, q0 in enumerate(q0s):
        pop = [(t, p_means[(q0, t)]) for t in thetas if p_means[(q0, t)] is not None]
        if pop:
            left.plot([p[0] for p in pop], [p[1] for p in pop], "o-",
                      color=f"C{idx}", label=f"q0={q0:g}")
            plotted = True
        gap = [(t, p_means[(q0, t)] - a_means[(q0, t)]) for t in thetas
               if p_means[(q0, t)] is not None and a_means[(q0, t)] is not None]
        if gap:
            right.plot([g[0] for g in gap], [g[1] for g in gap], "o-",
                       color=f"C{idx}", label=f"q0={q0:g}")
    if not plotted:
        raise EmptyDataError("no defined outcome means")
    for ax, title in ((left, "population mean"), (right, "population - arrested")):
        ax.axhline(0.0, color="0.7", lw=0.8, zorder=0)
        ax.set_xlabel("theta")
        ax.set_title(title, fontsize=10)
        ax.legend(fontsize=8)
    left.set_ylabel("mean signed disparity")
    fig.tight_layout()
    return fig


def _tolerances(rows: list) -> list[float]:
    tols = set()
    for name in rows[0]:
        if name.startswith("fair_a_"):
            tols.add(float(name[len("fair_a_"):]))
    return sorted(tols)


def fair_proportions(rows: list) -> plt.Figure:
    """Four panels of fair-outcome proportion against the tolerance.
    Top: arrested and population variants with every (q0, theta) line.
    Bottom: per-q0 comparison of the two variants."""
    tols = _tolerances(rows)
    if not tols:
        raise EmptyDataError("no fair_a_*/fair_p_* columns to plot")
    q0s = sorted({float(r["q0"]) for r in rows})
    thetas = sorted({float(r["theta"]) for r in rows})
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 7.0), sharey=True)

    def proportions(row, variant):
        return [float(row[f"fair_{variant}_{tol:g}"]) for tol in tols]

    for col, variant in enumerate(("a", "p")):
        ax = axes[0][col]
        for r in rows:
            theta = float(r["theta"])
            style = "-" if float(r["q0"]) == q0s[0] else "--"
            ax.plot(tols, proportions(r, variant), style,
                    color=f"C{thetas.index(theta)}", lw=1.2)
        ax.set_title("arrested" if variant == "a" else "population", fontsize=10)
    for col, q0 in enumerate(q0s[:2]):
        ax = axes[1][col]
        for r in rows:
            if float(r["q0"]) != q0:
                continue
            shade = 0.35 + 0.6 * (thetas.index(float(r["theta"])) + 1) / len(thetas)
            ax.plot(tols, proportions(r, "a"), color=ARRESTED_COLOR, alpha=shade)
            ax.plot(tols, proportions(r, "p"), color=POPULATION_COLOR, alpha=shade)
        ax.set_title(f"q0={q0:g} (arrested red, population blue)", fontsize=10)
    for ax in axes.flat:
        ax.set_xlabel("tolerance")
        ax.set_ylim(-0.05, 1.05)
    axes[0][0].set_ylabel("fair proportion")
    axes[1][0].set_ylabel("fair proportion")
    handles = [plt.Line2D([], [], color=f"C{k}", label=f"theta={t:g}")
               for k, t in enumerate(thetas)]
    axes[0][1].legend(handles=handles, fontsize=7)
    fig.tight_layout()
    return fig


def bandit_reward(rows: list) -> plt.Figure:
    """Mean reward per pull with a standard-error band where available."""
    pulls, means = _series(rows, "pull", "mean_reward")
    if not pulls:
        raise EmptyDataError("no reward values to plot")
    ses = column(rows, "se")
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(pulls, means, color="C0")
    banded = [(p, m, s) for p, m, s in zip(pulls, means, ses) if s is not None]
    if banded:
        xs = [b[0] for b in banded]
        lo = [b[1] - b[2] for b in banded]
        hi = [b[1] + b[2] for b in banded]
        ax.fill_between(xs, lo, hi, color="C0", alpha=0.2)
    ax.set_xlabel("pull")
    ax.set_ylabel("mean reward")
    fig.tight_layout()
    return fig


def bandit_actions(rows: list) -> plt.Figure:
    """Aggregate selection share per action as bars, with per-run shares as
    dots on top."""
    aggregate = [(float(r["theta"]), float(r["proportion"]))
                 for r in rows if r["run"] == ""]
    if not aggregate:
        raise EmptyDataError("no aggregate rows (empty run field) in input")
    aggregate.sort()
    thetas = [a[0] for a in aggregate]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.bar(range(len(aggregate)), [a[1] for a in aggregate],
           color="C0", alpha=0.8)
    for r in rows:
        if r["run"] == "":
            continue
        theta = float(r["theta"])
        if theta in thetas:
            ax.plot(thetas.index(theta), float(r["proportion"]), ".",
                    color="0.3", ms=4, alpha=0.6)
    ax.set_xticks(range(len(thetas)), [f"{t:g}" for t in thetas])
    ax.set_xlabel("theta")
    ax.set_ylabel("selection proportion")
    fig.tight_layout()
    return fig
