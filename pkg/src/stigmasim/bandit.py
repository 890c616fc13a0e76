"""Epsilon-greedy policy search over the cop stigma-following rate."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .config import SimConfig
from .engine import run_sim
from .errors import ConfigError
from .metrics import compute_report, fairness_indicator, format_value
from .sweep import derive_seed

DEFAULT_ACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


def default_episode() -> SimConfig:
    """Episode template the search runs against.

    A small symmetric world with an odd cop count: the initial 2-versus-1
    regional split is erased by mixing when cops ignore the stigma field but
    frozen in place when they follow it, so the fairness reward separates the
    arms within a 1000-tick episode.
    """
    return SimConfig(grid_width=30, grid_height=30, n_per_group=250,
                     n_cops=3, cop_bias=0.5, max_ticks=1000)


@dataclass(frozen=True)
class BanditConfig:
    actions: tuple = DEFAULT_ACTIONS
    epsilon: float = 0.1
    pulls: int = 200
    runs: int = 30
    episode: SimConfig = field(default_factory=default_episode)
    eps_tol: float = 1.0
    master_seed: int = 0

    def validate(self) -> None:
        if not self.actions:
            raise ConfigError("actions", "must list at least one theta value")
        for v in self.actions:
            if not 0.0 <= v <= 1.0:
                raise ConfigError("actions", f"theta values must lie in [0, 1], got {v}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon", f"must lie in [0, 1], got {self.epsilon}")
        if self.pulls < 1:
            raise ConfigError("pulls", f"must be >= 1, got {self.pulls}")
        if self.runs < 1:
            raise ConfigError("runs", f"must be >= 1, got {self.runs}")
        if not self.eps_tol > 0:
            raise ConfigError("eps_tol", f"must be positive, got {self.eps_tol}")
        if self.master_seed < 0:
            raise ConfigError("master_seed", f"must be >= 0, got {self.master_seed}")
        self.episode.validate()

    def to_json(self) -> dict:
        return {
            "actions": list(self.actions),
            "epsilon": self.epsilon,
            "pulls": self.pulls,
            "runs": self.runs,
            "eps_tol": self.eps_tol,
            "master_seed": self.master_seed,
            "episode": self.episode.to_json(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BanditConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config", f"expected a JSON object, got {type(doc).__name__}")
        known = set(cls.__dataclass_fields__)
        fields = {}
        for key, value in doc.items():
            if key not in known:
                raise ConfigError(key, "unknown configuration field")
            fields[key] = value
        if "episode" in fields:
            fields["episode"] = SimConfig.from_json(fields["episode"])
        if "actions" in fields:
            fields["actions"] = tuple(fields["actions"])
        cfg = cls(**fields)
        cfg.validate()
        return cfg


@dataclass
class BanditState:
    """Running value estimates. q_values[a] is exactly the mean reward
    received for action a; history rows are (pull index, action, reward)."""
    q_values: np.ndarray
    pull_counts: np.ndarray
    history: list

    @classmethod
    def fresh(cls, n_actions: int) -> "BanditState":
        return cls(q_values=np.zeros(n_actions),
                   pull_counts=np.zeros(n_actions, dtype=np.int64),
                   history=[])


def select_action(state: BanditState, epsilon: float,
                  rng: np.random.Generator) -> int:
    """Explore uniformly with probability epsilon, otherwise pick the argmax
    of the value estimates with uniform tie-breaking."""
    n = state.q_values.size
    if rng.random() < epsilon:
        return int(rng.integers(n))
    best = np.flatnonzero(state.q_values == state.q_values.max())
    return int(best[rng.integers(best.size)])


def pull(theta: float, episode: SimConfig, eps_tol: float, seed: int) -> int:
    """Fresh episode at the chosen theta; reward is the population fairness
    indicator at the final tick."""
    cfg = episode.with_overrides(stigma_follow=theta, seed=seed)
    log, _ = run_sim(cfg)
    report = compute_report(log, cfg.n_per_group)
    return fairness_indicator(report.tau1_p, eps_tol)


def update(state: BanditState, action: int, reward: float) -> BanditState:
    state.pull_counts[action] += 1
    state.q_values[action] += (reward - state.q_values[action]) / state.pull_counts[action]
    state.history.append((len(state.history), action, float(reward)))
    return state


def run_one(config: BanditConfig, run_index: int) -> BanditState:
    """A single bandit repetition. Selection noise comes from a per-run
    stream; each episode's seed is bound to (run, pull), so repetitions are
    reproducible independently of each other."""
    rng = np.random.default_rng(derive_seed(config.master_seed, run_index))
    state = BanditState.fresh(len(config.actions))
    for p in range(config.pulls):
        action = select_action(state, config.epsilon, rng)
        seed = derive_seed(config.master_seed, run_index, p)
        reward = pull(config.actions[action], config.episode, config.eps_tol, seed)
        update(state, action, reward)
    return state


@dataclass(frozen=True)
class BanditResult:
    actions: tuple
    choices: np.ndarray
    rewards: np.ndarray


def _run_job(args) -> tuple:
    config, run_index = args
    state = run_one(config, run_index)
    choices = np.array([a for _, a, _ in state.history], dtype=np.int64)
    rewards = np.array([r for _, _, r in state.history], dtype=np.float64)
    return choices, rewards


def run_bandit(config: BanditConfig, workers: int = 1,
               progress: Optional[Callable] = None) -> BanditResult:
    """`runs` independent repetitions of `pulls` pulls each. Repetitions may
    run in parallel; pulls within a repetition are inherently sequential."""
    config.validate()
    jobs = [(config, i) for i in range(config.runs)]
    results = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for item in pool.map(_run_job, jobs):
                results.append(item)
                if progress is not None:
                    progress(len(results), config.runs)
    else:
        for job in jobs:
            results.append(_run_job(job))
            if progress is not None:
                progress(len(results), config.runs)
    choices = np.stack([c for c, _ in results])
    rewards = np.stack([r for _, r in results])
    return BanditResult(actions=tuple(config.actions), choices=choices,
                        rewards=rewards)


def reward_curve(result: BanditResult) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Mean reward per pull index across runs, with its standard error
    (None when there is only one run)."""
    mean = result.rewards.mean(axis=0)
    runs = result.rewards.shape[0]
    if runs < 2:
        return mean, None
    se = result.rewards.std(axis=0, ddof=1) / math.sqrt(runs)
    return mean, se


def selection_proportions(result: BanditResult) -> tuple[np.ndarray, np.ndarray]:
    """Per-run and aggregate fraction of pulls spent on each action."""
    runs, pulls = result.choices.shape
    n_actions = len(result.actions)
    per_run = np.stack([np.bincount(result.choices[i], minlength=n_actions)
                        for i in range(runs)]) / pulls
    aggregate = np.bincount(result.choices.ravel(), minlength=n_actions) / (runs * pulls)
    return per_run, aggregate


def write_reward_csv(result: BanditResult, path) -> None:
    mean, se = reward_curve(result)
    lines = ["pull,mean_reward,se"]
    for i in range(mean.size):
        se_val = None if se is None else float(se[i])
        lines.append(f"{i + 1},{format_value(float(mean[i]))},{format_value(se_val)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_actions_csv(result: BanditResult, path) -> None:
    """Selection proportions, one row per (run, action), then aggregate rows
    with an empty run field."""
    per_run, aggregate = selection_proportions(result)
    lines = ["run,theta,proportion"]
    for i in range(per_run.shape[0]):
        for a, theta in enumerate(result.actions):
            lines.append(f"{i + 1},{format_value(float(theta))},"
                         f"{format_value(float(per_run[i, a]))}")
    for a, theta in enumerate(result.actions):
        lines.append(f",{format_value(float(theta))},"
                     f"{format_value(float(aggregate[a]))}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
