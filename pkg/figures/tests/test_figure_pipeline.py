"""End-to-end: produce CSVs with the simulator CLI, then render every
figure id from them. The two packages touch only through the files."""

import json
import subprocess
import sys

import matplotlib

matplotlib.use("Agg")

import pytest

from stigmafig import load_rows, render
from stigmafig.cli import FIGURES, main

BASE = {"grid_width": 20, "grid_height": 20, "n_per_group": 40, "n_cops": 4,
        "max_ticks": 300}


def run_primary(args):
    proc = subprocess.run([sys.executable, "-m", "stigmasim", *args],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="module")
def primary_outputs(tmp_path_factory):
    root = tmp_path_factory.mktemp("primary")
    sim_cfg = root / "sim.json"
    sim_cfg.write_text(json.dumps(dict(BASE, stigma_follow=0.75, cop_bias=0.8,
                                       seed=7)))
    run_primary(["simulate", "--config", str(sim_cfg),
                 "--out", str(root / "sim"), "--measure-every", "50"])

    sweep_cfg = root / "sweep.json"
    sweep_cfg.write_text(json.dumps({
        "theta_grid": [0.0, 0.25, 0.5, 0.75, 1.0], "q0_grid": [0.5, 0.8],
        "replicates": 6, "base": BASE, "master_seed": 5}))
    run_primary(["sweep", "--config", str(sweep_cfg),
                 "--out", str(root / "sweep"), "--workers", "1"])

    bandit_cfg = root / "bandit.json"
    bandit_cfg.write_text(json.dumps({
        "actions": [0.0, 0.5, 1.0], "pulls": 8, "runs": 3,
        "episode": BASE, "master_seed": 9}))
    run_primary(["bandit", "--config", str(bandit_cfg),
                 "--out", str(root / "bandit"), "--workers", "1"])
    return root


def test_all_seven_figures_render(primary_outputs, tmp_path):
    inputs = {
        "tau_series": primary_outputs / "sim" / "metrics.csv",
        "arrest_ratio": primary_outputs / "sim" / "metrics.csv",
        "outcome_density": primary_outputs / "sweep" / "outcomes.csv",
        "outcome_means": primary_outputs / "sweep" / "outcomes.csv",
        "fair_proportions": primary_outputs / "sweep" / "summary.csv",
        "bandit_reward": primary_outputs / "bandit" / "bandit_reward.csv",
        "bandit_actions": primary_outputs / "bandit" / "bandit_actions.csv",
    }
    assert set(inputs) == set(FIGURES)
    for figure_id, csv_path in inputs.items():
        out = tmp_path / f"{figure_id}.png"
        rc = main([figure_id, "--in", str(csv_path), "--out", str(out)])
        assert rc == 0, figure_id
        assert out.stat().st_size > 0, figure_id


def test_density_grid_matches_sweep_layout(primary_outputs):
    rows = load_rows(primary_outputs / "sweep" / "outcomes.csv",
                     ("theta", "q0", "tau1_a", "tau1_p"))
    fig = render.outcome_density(rows)
    assert len(fig.axes) == 2 * 5
    assert fig.axes[0].get_subplotspec().get_gridspec().get_geometry() == (2, 5)


def test_bandwidth_override_runs(primary_outputs, tmp_path):
    out = tmp_path / "dens.png"
    rc = main(["outcome_density",
               "--in", str(primary_outputs / "sweep" / "outcomes.csv"),
               "--out", str(out), "--bandwidth", "0.5"])
    assert rc == 0
    assert out.stat().st_size > 0
