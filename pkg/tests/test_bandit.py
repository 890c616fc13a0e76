import csv

import numpy as np
import pytest

from stigmasim import BanditConfig, ConfigError, SimConfig, run_bandit
from stigmasim.bandit import (
    BanditState,
    default_episode,
    pull,
    reward_curve,
    select_action,
    selection_proportions,
    update,
    write_actions_csv,
    write_reward_csv,
)

FAST_EPISODE = SimConfig(grid_width=20, grid_height=20, n_per_group=30,
                         n_cops=3, cop_bias=0.5, max_ticks=40)


def test_select_action_pure_exploration_is_uniform():
    rng = np.random.default_rng(5)
    state = BanditState.fresh(5)
    counts = np.zeros(5)
    n = 10_000
    for _ in range(n):
        counts[select_action(state, 1.0, rng)] += 1
    assert np.all(np.abs(counts / n - 0.2) < 0.05)


def test_select_action_greedy_takes_argmax():
    rng = np.random.default_rng(9)
    state = BanditState.fresh(4)
    state.q_values[:] = [0.1, 0.7, 0.3, 0.2]
    assert all(select_action(state, 0.0, rng) == 1 for _ in range(50))
    # shifting and scaling every estimate the same way keeps the choice
    state.q_values[:] = state.q_values * 3.0 + 2.0
    assert all(select_action(state, 0.0, rng) == 1 for _ in range(50))


def test_select_action_exploit_frequency():
    """At epsilon=0.1 the best arm is taken with frequency 0.9 + 0.1/k."""
    rng = np.random.default_rng(31)
    state = BanditState.fresh(5)
    state.q_values[:] = [0.0, 0.0, 1.0, 0.0, 0.0]
    n = 10_000
    hits = sum(select_action(state, 0.1, rng) == 2 for _ in range(n))
    assert abs(hits / n - 0.92) < 0.01


def test_select_action_breaks_ties_uniformly():
    rng = np.random.default_rng(123)
    state = BanditState.fresh(3)
    state.q_values[:] = [0.4, 0.4, 0.1]
    n = 10_000
    counts = np.zeros(3)
    for _ in range(n):
        counts[select_action(state, 0.0, rng)] += 1
    assert counts[2] == 0
    assert abs(counts[0] / n - 0.5) < 0.05


def test_update_incremental_mean():
    state = BanditState.fresh(2)
    for reward in (1.0, 0.0, 1.0):
        update(state, 0, reward)
    assert state.q_values[0] == pytest.approx(2 / 3)
    assert state.pull_counts[0] == 3
    assert state.q_values[1] == 0.0
    assert [h[1] for h in state.history] == [0, 0, 0]
    assert [h[2] for h in state.history] == [1.0, 0.0, 1.0]


def test_update_first_reward_overwrites_initial_estimate():
    state = BanditState.fresh(2)
    update(state, 1, 0.25)
    assert state.q_values[1] == 0.25


def test_incremental_mean_matches_batch_mean():
    rng = np.random.default_rng(7)
    rewards = rng.random(10_000)
    state = BanditState.fresh(1)
    for r in rewards:
        update(state, 0, float(r))
    assert abs(state.q_values[0] - rewards.mean()) < 1e-12


def test_pull_is_deterministic_in_seed():
    a = pull(0.5, FAST_EPISODE, 1.0, seed=99)
    b = pull(0.5, FAST_EPISODE, 1.0, seed=99)
    assert a == b
    assert a in (0.0, 1.0)


def test_pull_without_crime_yields_zero():
    episode = FAST_EPISODE.with_overrides(crime_rate=0.0)
    assert pull(0.0, episode, 1.0, seed=3) == 0.0


def test_run_bandit_shapes_and_one_hot():
    cfg = BanditConfig(actions=(0.0, 1.0), epsilon=0.0, pulls=1, runs=1,
                       episode=FAST_EPISODE, master_seed=2)
    result = run_bandit(cfg)
    assert result.choices.shape == (1, 1)
    assert result.rewards.shape == (1, 1)
    per_run, aggregate = selection_proportions(result)
    assert per_run.shape == (1, 2)
    assert per_run.sum() == pytest.approx(1.0)
    assert aggregate.sum() == pytest.approx(1.0)


def test_flat_rewards_leave_selection_uniform():
    """With every reward zero the tie never breaks, so arms stay balanced."""
    episode = FAST_EPISODE.with_overrides(max_ticks=0)
    cfg = BanditConfig(epsilon=0.1, pulls=200, runs=50, episode=episode,
                       master_seed=8)
    result = run_bandit(cfg)
    assert np.all(result.rewards == 0.0)
    _, aggregate = selection_proportions(result)
    assert np.all(np.abs(aggregate - 0.2) < 0.05)
    curve, se = reward_curve(result)
    assert np.all(curve == 0.0)
    assert np.all(se == 0.0)


def test_run_bandit_deterministic_and_worker_invariant():
    cfg = BanditConfig(pulls=6, runs=4, episode=FAST_EPISODE, master_seed=13)
    a = run_bandit(cfg)
    b = run_bandit(cfg)
    c = run_bandit(cfg, workers=2)
    assert np.array_equal(a.choices, b.choices)
    assert np.array_equal(a.rewards, b.rewards)
    assert np.array_equal(a.choices, c.choices)
    assert np.array_equal(a.rewards, c.rewards)


def test_reward_curve_se_none_for_single_run():
    cfg = BanditConfig(pulls=3, runs=1, episode=FAST_EPISODE, master_seed=1)
    result = run_bandit(cfg)
    curve, se = reward_curve(result)
    assert curve.shape == (3,)
    assert se is None


def test_csv_outputs(tmp_path):
    cfg = BanditConfig(actions=(0.0, 0.5), pulls=4, runs=2,
                       episode=FAST_EPISODE, master_seed=21)
    result = run_bandit(cfg)

    reward_path = tmp_path / "bandit_reward.csv"
    write_reward_csv(result, reward_path)
    with open(reward_path) as fh:
        rows = list(csv.DictReader(fh))
    assert [r["pull"] for r in rows] == ["1", "2", "3", "4"]
    assert all(set(r) == {"pull", "mean_reward", "se"} for r in rows)

    actions_path = tmp_path / "bandit_actions.csv"
    write_actions_csv(result, actions_path)
    with open(actions_path) as fh:
        rows = list(csv.DictReader(fh))
    # one row per (run, action) plus aggregate rows with a blank run field
    assert len(rows) == 2 * 2 + 2
    per_run, aggregate = selection_proportions(result)
    agg_rows = [r for r in rows if r["run"] == ""]
    assert [float(r["theta"]) for r in agg_rows] == [0.0, 0.5]
    assert [float(r["proportion"]) for r in agg_rows] == pytest.approx(aggregate)


def test_default_episode_template():
    episode = default_episode()
    episode.validate()
    assert episode.n_cops == 3
    assert episode.cop_bias == 0.5
    assert episode.max_ticks == 1000


def test_config_validation_and_round_trip():
    with pytest.raises(ConfigError) as err:
        BanditConfig(epsilon=1.5).validate()
    assert err.value.field == "epsilon"
    with pytest.raises(ConfigError) as err:
        BanditConfig(pulls=0).validate()
    assert err.value.field == "pulls"
    with pytest.raises(ConfigError) as err:
        BanditConfig(actions=()).validate()
    assert err.value.field == "actions"

    cfg = BanditConfig(pulls=7, runs=3, master_seed=5)
    doc = cfg.to_json()
    assert BanditConfig.from_json(doc) == cfg
    doc["woops"] = True
    with pytest.raises(ConfigError) as err:
        BanditConfig.from_json(doc)
    assert err.value.field == "woops"
