import matplotlib

matplotlib.use("Agg")

import pytest

from stigmafig import EmptyDataError, SchemaError, load_rows
from stigmafig import render
from stigmafig.cli import main


def write(path, text):
    path.write_text(text)
    return str(path)


METRICS_HEADER = "tick,tau_a,tau_p,arrest_ratio\n"


def metrics_csv(tmp_path, rows, name="metrics.csv"):
    return write(tmp_path / name, METRICS_HEADER + "".join(rows))


OUTCOMES_HEADER = "theta,q0,replicate,seed,tau1_a,tau1_p,tau_a,tau_p,arrest_ratio,Y_a_1,Y_p_1\n"


def outcomes_csv(tmp_path, rows):
    return write(tmp_path / "outcomes.csv", OUTCOMES_HEADER + "".join(rows))


def test_missing_column_diagnostic(tmp_path):
    path = write(tmp_path / "bad.csv", "tick,tau_a\n1,0.5\n")
    with pytest.raises(SchemaError) as err:
        load_rows(path, ("tick", "tau_a", "tau_p"))
    assert "tau_p" in str(err.value)
    assert "tau_a" in str(err.value)  # the diagnostic lists what was found


def test_empty_file_and_headers_only(tmp_path):
    empty = write(tmp_path / "empty.csv", "")
    with pytest.raises(EmptyDataError):
        load_rows(empty, ("tick",))
    headers = write(tmp_path / "h.csv", "tick,tau_a,tau_p\n")
    with pytest.raises(EmptyDataError):
        load_rows(headers, ("tick", "tau_a", "tau_p"))


def test_tau_series_flat_zero(tmp_path):
    path = metrics_csv(tmp_path, [f"{t},0.0,0.0,1.0\n" for t in (50, 100, 150)])
    rows = load_rows(path, ("tick", "tau_a", "tau_p"))
    fig = render.tau_series([("run", rows)])
    lines = fig.axes[0].get_lines()
    flat = [ln for ln in lines if len(ln.get_xdata()) == 3]
    assert len(flat) == 2  # arrested and population series
    for ln in flat:
        assert all(y == 0.0 for y in ln.get_ydata())


def test_tau_series_all_null_raises(tmp_path):
    path = metrics_csv(tmp_path, ["50,,,\n", "100,,,\n"])
    rows = load_rows(path, ("tick", "tau_a", "tau_p"))
    with pytest.raises(EmptyDataError):
        render.tau_series([("run", rows)])


def test_density_grid_rows_and_columns(tmp_path):
    rows = []
    for theta in (0.0, 0.25, 0.5, 0.75, 1.0):
        for q0 in (0.5, 0.8):
            for i in range(4):
                v = 0.1 * i - 0.2 + theta
                rows.append(f"{theta},{q0},{i},1,{v},{v * 2},0,0,1,1,1\n")
    data = load_rows(outcomes_csv(tmp_path, rows),
                     ("theta", "q0", "tau1_a", "tau1_p"))
    fig = render.outcome_density(data)
    assert len(fig.axes) == 2 * 5
    geometry = fig.axes[0].get_subplotspec().get_gridspec().get_geometry()
    assert geometry == (2, 5)


def test_density_handles_degenerate_cells(tmp_path):
    # one cell has a point mass, the other has nothing defined
    rows = ["0.0,0.5,0,1,0.3,0.3,0,0,1,1,1\n",
            "0.0,0.5,1,1,0.3,0.3,0,0,1,1,1\n",
            "1.0,0.5,0,1,,,,,,0,0\n"]
    data = load_rows(outcomes_csv(tmp_path, rows),
                     ("theta", "q0", "tau1_a", "tau1_p"))
    fig = render.outcome_density(data)
    assert len(fig.axes) == 1 * 2


def test_density_all_empty_raises(tmp_path):
    rows = ["0.0,0.5,0,1,,,,,,0,0\n"]
    data = load_rows(outcomes_csv(tmp_path, rows),
                     ("theta", "q0", "tau1_a", "tau1_p"))
    with pytest.raises(EmptyDataError):
        render.outcome_density(data)


def test_bandit_actions_tallest_bar(tmp_path):
    path = write(tmp_path / "actions.csv",
                 "run,theta,proportion\n"
                 "1,0.0,0.6\n1,0.5,0.4\n2,0.0,0.5\n2,0.5,0.5\n"
                 ",0.0,0.55\n,0.5,0.45\n")
    rows = load_rows(path, ("run", "theta", "proportion"))
    fig = render.bandit_actions(rows)
    heights = [p.get_height() for p in fig.axes[0].patches]
    assert heights == [0.55, 0.45]


def test_bandit_actions_requires_aggregate_rows(tmp_path):
    path = write(tmp_path / "actions.csv",
                 "run,theta,proportion\n1,0.0,0.6\n1,0.5,0.4\n")
    rows = load_rows(path, ("run", "theta", "proportion"))
    with pytest.raises(EmptyDataError):
        render.bandit_actions(rows)


def test_rendering_leaves_inputs_untouched_and_is_stable(tmp_path):
    path = metrics_csv(tmp_path, [f"{t},{0.1 * t},{0.2 * t},1.5\n"
                                  for t in range(1, 6)])
    before = open(path, "rb").read()
    figs = []
    for _ in range(2):
        rows = load_rows(path, ("tick", "tau_a", "tau_p"))
        figs.append(render.tau_series([("run", rows)]))
    assert open(path, "rb").read() == before
    a, b = (f.axes[0].get_lines() for f in figs)
    assert [tuple(ln.get_ydata()) for ln in a] == [tuple(ln.get_ydata()) for ln in b]


def test_cli_writes_image_and_exit_codes(tmp_path):
    path = metrics_csv(tmp_path, ["50,0.1,0.2,1.0\n", "100,0.2,0.1,1.1\n"])
    out = tmp_path / "fig.png"
    assert main(["tau_series", "--in", path, "--out", str(out)]) == 0
    assert out.stat().st_size > 0

    # schema mismatch comes back as a config-style failure
    bad = write(tmp_path / "bad.csv", "a,b\n1,2\n")
    assert main(["tau_series", "--in", bad, "--out", str(out)]) == 2
    # missing input file is an I/O failure
    assert main(["tau_series", "--in", str(tmp_path / "gone.csv"),
                 "--out", str(out)]) == 3
    # single-input figures reject multiple --in
    assert main(["bandit_reward", "--in", path, "--in", path,
                 "--out", str(out)]) == 2
