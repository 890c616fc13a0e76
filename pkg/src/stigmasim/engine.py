"""World state, per-tick operations, and the full simulation loop.

The model: two civilian groups confined to the left/right halves of a bounded
grid, cops that roam the whole grid, and a per-cell stigma field that grows
where arrests happen. Cops follow the stigma field with probability theta and
random-walk otherwise, so arrest locations feed back into future patrols.

Determinism contract: a run consumes one PCG64 stream seeded from the config.
Each tick uses a fixed layout of uniform draws (see tick_layout), so the same
(config, seed) pair always produces the same event log, whichever backend
executes the ticks and however they are chunked. Stepping a state manually via
step_civilians / step_cops / sweep_arrests consumes the stream identically to
run_sim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from . import _kernels_numpy as _np_kernel
from .backend import get_kernel
from .config import SimConfig

EVENT_COLUMNS = ("tick", "agent_id", "group", "cell_x", "cell_y", "J", "R")

# ticks are simulated in fixed-size blocks; a pure performance knob, the
# draw stream is identical for any block size
CHUNK_TICKS = 256


@dataclass(frozen=True)
class ArrestEvent:
    tick: int
    agent_id: int
    group: int
    cell: tuple[int, int]
    judged_positive: bool
    recidivated: bool


class EventLog:
    """Ordered arrest records as an (n, 7) integer array.

    Columns follow EVENT_COLUMNS; rows are ordered by tick, then by agent id
    within a tick.
    """

    def __init__(self, array: np.ndarray | None = None):
        if array is None:
            array = np.empty((0, 7), dtype=np.int64)
        self.array = np.asarray(array, dtype=np.int64).reshape(-1, 7)

    def __len__(self) -> int:
        return self.array.shape[0]

    def __iter__(self) -> Iterator[ArrestEvent]:
        for row in self.array:
            yield ArrestEvent(
                tick=int(row[0]),
                agent_id=int(row[1]),
                group=int(row[2]),
                cell=(int(row[3]), int(row[4])),
                judged_positive=bool(row[5]),
                recidivated=bool(row[6]),
            )

    def column(self, name: str) -> np.ndarray:
        return self.array[:, EVENT_COLUMNS.index(name)]

    def up_to(self, tick: int) -> "EventLog":
        """Events with event.tick <= tick (the log is tick-ordered)."""
        cut = np.searchsorted(self.array[:, 0], tick, side="right")
        return EventLog(self.array[:cut])

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(EVENT_COLUMNS) + "\n")
            for row in self.array:
                fh.write(",".join(str(int(v)) for v in row) + "\n")

    def to_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for row in self.array:
                fh.write(json.dumps(dict(zip(EVENT_COLUMNS, (int(v) for v in row)))) + "\n")

    @classmethod
    def from_csv(cls, path: str | Path) -> "EventLog":
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != ",".join(EVENT_COLUMNS):
                raise ValueError(f"unexpected event log header: {header!r}")
            rows = [[int(v) for v in line.split(",")] for line in fh if line.strip()]
        if not rows:
            return cls()
        return cls(np.array(rows, dtype=np.int64))


class Civilian:
    """View of one civilian's slice of the state arrays. Position and flag
    are read-only; the adjudication bookkeeping fields write through."""

    def __init__(self, state: "SimState", i: int):
        self._s = state
        self.id = i

    @property
    def group(self) -> int:
        return 1 if self.id < self._s.config.n_per_group else 2

    @property
    def pos(self) -> tuple[int, int]:
        return int(self._s.civ_x[self.id]), int(self._s.civ_y[self.id])

    @property
    def crime_flag(self) -> bool:
        return bool(self._s.crime_flags[self.id])

    @property
    def arrest_count(self) -> int:
        return int(self._s.arrest_count[self.id])

    @arrest_count.setter
    def arrest_count(self, value: int) -> None:
        self._s.arrest_count[self.id] = value

    @property
    def ever_positive_j(self) -> bool:
        return bool(self._s.ever_j[self.id])

    @ever_positive_j.setter
    def ever_positive_j(self, value: bool) -> None:
        self._s.ever_j[self.id] = value

    @property
    def ever_recidivist(self) -> bool:
        return bool(self._s.ever_r[self.id])

    @ever_recidivist.setter
    def ever_recidivist(self, value: bool) -> None:
        self._s.ever_r[self.id] = value


class Cop:
    def __init__(self, state: "SimState", i: int):
        self._s = state
        self.id = i

    @property
    def pos(self) -> tuple[int, int]:
        return int(self._s.cop_x[self.id]), int(self._s.cop_y[self.id])


class _Roster:
    def __init__(self, state: "SimState", cls, size: int):
        self._state = state
        self._cls = cls
        self._size = size

    def __len__(self) -> int:
        return self._size

    def __getitem__(self, i: int):
        if not 0 <= i < self._size:
            raise IndexError(i)
        return self._cls(self._state, i)


@dataclass
class SimState:
    config: SimConfig
    stigma: np.ndarray
    civ_x: np.ndarray
    civ_y: np.ndarray
    crime_flags: np.ndarray
    arrest_count: np.ndarray
    ever_j: np.ndarray
    ever_r: np.ndarray
    cop_x: np.ndarray
    cop_y: np.ndarray
    tick: int
    rng: np.random.Generator
    event_rows: list = field(default_factory=list)

    @property
    def civilians(self) -> _Roster:
        return _Roster(self, Civilian, 2 * self.config.n_per_group)

    @property
    def cops(self) -> _Roster:
        return _Roster(self, Cop, self.config.n_cops)

    def region_of(self, x: int) -> int:
        return 1 if x < self.config.grid_width // 2 else 2


def tick_layout(config: SimConfig) -> int:
    """Uniform draws consumed per tick: move + crime per civilian, 4 slots
    per cop, then arrest/judge/recidivism slots per civilian."""
    n = 2 * config.n_per_group
    return 5 * n + 4 * config.n_cops


def init_state(config: SimConfig) -> SimState:
    """Build tick-0 state: civilians uniform in their own regions, cops split
    round(q0 * n_cops) into region 1, zero stigma."""
    config.validate()
    w, h = config.grid_width, config.grid_height
    half = w // 2
    n = 2 * config.n_per_group
    rng = np.random.default_rng(int(config.seed))

    u = rng.random((n, 2))
    civ_x = np.empty(n, dtype=np.int64)
    civ_y = np.empty(n, dtype=np.int64)
    for i in range(n):
        lo = 0 if i < config.n_per_group else half
        civ_x[i] = lo + int(u[i, 0] * half)
        civ_y[i] = int(u[i, 1] * h)

    n_region1 = int(config.cop_bias * config.n_cops + 0.5)
    uc = rng.random((config.n_cops, 2))
    cop_x = np.empty(config.n_cops, dtype=np.int64)
    cop_y = np.empty(config.n_cops, dtype=np.int64)
    for c in range(config.n_cops):
        lo = 0 if c < n_region1 else half
        cop_x[c] = lo + int(uc[c, 0] * half)
        cop_y[c] = int(uc[c, 1] * h)

    return SimState(
        config=config,
        stigma=np.zeros((w, h), dtype=np.float64),
        civ_x=civ_x,
        civ_y=civ_y,
        crime_flags=np.zeros(n, dtype=np.bool_),
        arrest_count=np.zeros(n, dtype=np.int64),
        ever_j=np.zeros(n, dtype=np.bool_),
        ever_r=np.zeros(n, dtype=np.bool_),
        cop_x=cop_x,
        cop_y=cop_y,
        tick=0,
        rng=rng,
    )


def step_civilians(state: SimState) -> SimState:
    """Clear last tick's crime flags, move every civilian one Moore step
    inside its region, then draw fresh crime flags."""
    cfg = state.config
    n = 2 * cfg.n_per_group
    half = cfg.grid_width // 2
    u = state.rng.random(2 * n)
    ids = np.arange(n)
    x_lo = np.where(ids < cfg.n_per_group, 0, half)
    x_hi = np.where(ids < cfg.n_per_group, half - 1, cfg.grid_width - 1)
    _np_kernel.move_civilians(state.civ_x, state.civ_y, u[:n], x_lo, x_hi, cfg.grid_height)
    _np_kernel.set_crime_flags(state.crime_flags, u[n:], cfg.crime_rate)
    return state


def step_cops(state: SimState) -> SimState:
    cfg = state.config
    u = state.rng.random(4 * cfg.n_cops)
    _np_kernel.move_cops(
        state.cop_x, state.cop_y, state.stigma, u,
        cfg.stigma_follow, cfg.long_move_prob, cfg.long_move_len,
        cfg.grid_width, cfg.grid_height, cfg.cop_rule == "sequential")
    return state


def bump_stigma(state: SimState, cell: tuple[int, int]) -> SimState:
    x, y = cell
    if not (0 <= x < state.config.grid_width and 0 <= y < state.config.grid_height):
        raise ValueError(f"cell {cell} outside grid")
    _np_kernel.bump_stigma(state.stigma, int(x), int(y),
                           state.config.stigma_bump_center,
                           state.config.stigma_bump_neighbor)
    return state


def sweep_arrests(state: SimState) -> list[tuple[int, int]]:
    """Arrest flagged civilians adjacent to cops, adjudicate, bump stigma.

    Returns (cop_id, civilian_id) pairs, one per arrested civilian, the cop
    being the lowest-id cop adjacent to the arrestee. Appends event rows to
    state.event_rows and advances state.tick by one, completing the tick.
    """
    cfg = state.config
    n = 2 * cfg.n_per_group
    u = state.rng.random(3 * n)
    events = np.empty((n, 7), dtype=np.int64)
    n_events, pairs = _np_kernel.sweep_tick(
        state.civ_x, state.civ_y, state.crime_flags,
        state.arrest_count, state.ever_j, state.ever_r,
        state.cop_x, state.cop_y, state.stigma,
        u[:n], u[n:2 * n], u[2 * n:],
        cfg.arrest_rate, cfg.sentencing_rate, cfg.recidivism_rate,
        cfg.stigma_bump_center, cfg.stigma_bump_neighbor,
        cfg.n_per_group, state.tick, events, 0)
    state.event_rows.extend(events[:n_events].tolist())
    state.tick += 1
    return pairs


def run_sim(config: SimConfig, backend: str | None = None) -> tuple[EventLog, SimState]:
    """Run max_ticks full iterations from a fresh state.

    backend overrides the STIGMASIM_BACKEND env selection ("numba"/"numpy").
    Returns the tick-ordered event log and the final state.
    """
    state = init_state(config)
    kernel = get_kernel(backend)
    cfg = config
    n = 2 * cfg.n_per_group
    layout = tick_layout(cfg)
    half = cfg.grid_width // 2
    sequential = cfg.cop_rule == "sequential"
    buf = np.empty((CHUNK_TICKS * n, 7), dtype=np.int64)
    chunks = []
    while state.tick < cfg.max_ticks:
        span = min(CHUNK_TICKS, cfg.max_ticks - state.tick)
        draws = state.rng.random((span, layout))
        count = kernel(
            draws, state.civ_x, state.civ_y, state.crime_flags,
            state.arrest_count, state.ever_j, state.ever_r,
            state.cop_x, state.cop_y, state.stigma,
            buf, state.tick, cfg.n_per_group, half,
            cfg.grid_width, cfg.grid_height,
            cfg.stigma_follow, cfg.long_move_prob, cfg.long_move_len,
            cfg.crime_rate, cfg.arrest_rate, cfg.sentencing_rate,
            cfg.recidivism_rate, cfg.stigma_bump_center, cfg.stigma_bump_neighbor,
            sequential)
        if count:
            chunks.append(buf[:count].copy())
        state.tick += span
    log = EventLog(np.concatenate(chunks) if chunks else None)
    return log, state
