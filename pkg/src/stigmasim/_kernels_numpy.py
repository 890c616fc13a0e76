"""Pure-numpy tick kernels.

This is the reference backend: a python loop over ticks with vectorized
civilian updates and small explicit loops for cops and arrests. The numba
backend mirrors this logic statement for statement; both consume the same
pre-generated uniform draws at the same positions, so their outputs are
bit-identical (see the draw layout in engine.LAYOUT).

Grid convention: positions are (x, y) with 0 <= x < width, 0 <= y < height;
group 1 civilians live in x < width//2, group 2 in the right half. The 8
Moore directions are enumerated in the fixed order below everywhere a draw
selects among neighbors, which is what keeps backends interchangeable.
"""

from __future__ import annotations

import numpy as np

# fixed Moore-neighborhood enumeration order: (dx, dy), row-major, no (0,0)
DIRS = np.array(
    [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)],
    dtype=np.int64,
)


def move_civilians(civ_x, civ_y, u, x_lo, x_hi, height):
    """Move every civilian to a uniform random valid Moore neighbor.

    Valid means inside the grid and inside the agent's own region
    (x_lo/x_hi are per-agent column bounds). An agent with no valid
    neighbor (degenerate 1x1 region) stays put.
    """
    nx = civ_x[:, None] + DIRS[None, :, 0]
    ny = civ_y[:, None] + DIRS[None, :, 1]
    valid = (nx >= x_lo[:, None]) & (nx <= x_hi[:, None]) & (ny >= 0) & (ny < height)
    k = valid.sum(axis=1)
    j = np.minimum((u * k).astype(np.int64), np.maximum(k - 1, 0))
    # pick the j-th set bit per row
    sel = (np.cumsum(valid, axis=1) > j[:, None]).argmax(axis=1)
    rows = np.arange(civ_x.shape[0])
    movable = k > 0
    civ_x[movable] = nx[rows[movable], sel[movable]]
    civ_y[movable] = ny[rows[movable], sel[movable]]


def set_crime_flags(flags, u, crime_rate):
    np.less(u, crime_rate, out=flags)


def _stigma_step(x, y, stigma, u_tie, width, height):
    best = -1.0
    ties_dx = [0] * 8
    ties_dy = [0] * 8
    m = 0
    for d in range(8):
        x2 = x + int(DIRS[d, 0])
        y2 = y + int(DIRS[d, 1])
        if 0 <= x2 < width and 0 <= y2 < height:
            s = stigma[x2, y2]
            if s > best:
                best = s
                ties_dx[0] = x2
                ties_dy[0] = y2
                m = 1
            elif s == best:
                ties_dx[m] = x2
                ties_dy[m] = y2
                m += 1
    pick = min(int(u_tie * m), m - 1)
    return ties_dx[pick], ties_dy[pick]


def _random_step(x, y, u_dir, u_long, long_move_prob, long_move_len, width, height):
    d = min(int(u_dir * 8), 7)
    steps = long_move_len if u_long < long_move_prob else 1
    x2 = min(max(x + steps * int(DIRS[d, 0]), 0), width - 1)
    y2 = min(max(y + steps * int(DIRS[d, 1]), 0), height - 1)
    return x2, y2


def move_cops(cop_x, cop_y, stigma, u, theta, long_move_prob, long_move_len,
              width, height, sequential):
    """Move each cop; u holds 4 draws per cop (rule, tie-break, direction, long).

    Exclusive rule: stigma-following move with probability theta, else the
    random move. Sequential rule: the stigma move with probability theta AND
    the random move every tick.
    """
    for c in range(cop_x.shape[0]):
        u_rule, u_tie, u_dir, u_long = u[4 * c:4 * c + 4]
        x, y = int(cop_x[c]), int(cop_y[c])
        follow = u_rule < theta
        if follow:
            x, y = _stigma_step(x, y, stigma, u_tie, width, height)
        if sequential or not follow:
            x, y = _random_step(x, y, u_dir, u_long, long_move_prob,
                                long_move_len, width, height)
        cop_x[c] = x
        cop_y[c] = y


def bump_stigma(stigma, x, y, bump_center, bump_neighbor):
    stigma[x, y] += bump_center
    width, height = stigma.shape
    for d in range(8):
        x2 = x + int(DIRS[d, 0])
        y2 = y + int(DIRS[d, 1])
        if 0 <= x2 < width and 0 <= y2 < height:
            stigma[x2, y2] += bump_neighbor


def sweep_tick(civ_x, civ_y, flags, arrest_count, ever_j, ever_r,
               cop_x, cop_y, stigma, u_arrest, u_judge, u_recid,
               arrest_rate, sentencing_rate, recidivism_rate,
               bump_center, bump_neighbor, n_per_group, tick, events, n_events):
    """Arrest flagged civilians adjacent to cops; adjudicate; bump stigma.

    Events are appended to `events` starting at row n_events in civilian-id
    order; returns (new event count, list of (cop_id, civ_id) pairs). One
    combined draw per civilian covers all adjacent cops: the chance at least
    one of k cops makes the arrest is 1 - (1-r_a)^k, accumulated by repeated
    multiplication so the float matches the numba backend exactly.
    """
    pairs = []
    flagged = np.nonzero(flags)[0]
    for i in flagged:
        x = int(civ_x[i])
        y = int(civ_y[i])
        k = 0
        first_cop = -1
        for c in range(cop_x.shape[0]):
            if abs(int(cop_x[c]) - x) <= 1 and abs(int(cop_y[c]) - y) <= 1:
                k += 1
                if first_cop < 0:
                    first_cop = c
        if k == 0:
            continue
        miss = 1.0
        for _ in range(k):
            miss *= 1.0 - arrest_rate
        if u_arrest[i] >= 1.0 - miss:
            continue
        judged = u_judge[i] < sentencing_rate
        recid = u_recid[i] < recidivism_rate
        group = 1 if i < n_per_group else 2
        events[n_events, 0] = tick
        events[n_events, 1] = i
        events[n_events, 2] = group
        events[n_events, 3] = x
        events[n_events, 4] = y
        events[n_events, 5] = 1 if judged else 0
        events[n_events, 6] = 1 if recid else 0
        n_events += 1
        pairs.append((int(first_cop), int(i)))
        bump_stigma(stigma, x, y, bump_center, bump_neighbor)
        flags[i] = False
        arrest_count[i] += 1
        if judged:
            ever_j[i] = True
        if recid:
            ever_r[i] = True
    return n_events, pairs


def run_chunk(draws, civ_x, civ_y, flags, arrest_count, ever_j, ever_r,
              cop_x, cop_y, stigma, events, tick0, n_per_group, half,
              width, height, theta, long_move_prob, long_move_len, crime_rate,
              arrest_rate, sentencing_rate, recidivism_rate,
              bump_center, bump_neighbor, sequential):
    """Advance the world by draws.shape[0] ticks, mutating state in place.

    Returns the number of rows written to `events`.
    """
    n = civ_x.shape[0]
    n_cops = cop_x.shape[0]
    x_lo = np.where(np.arange(n) < n_per_group, 0, half)
    x_hi = np.where(np.arange(n) < n_per_group, half - 1, width - 1)
    n_events = 0
    for t in range(draws.shape[0]):
        row = draws[t]
        move_civilians(civ_x, civ_y, row[0:n], x_lo, x_hi, height)
        set_crime_flags(flags, row[n:2 * n], crime_rate)
        move_cops(cop_x, cop_y, stigma, row[2 * n:2 * n + 4 * n_cops],
                  theta, long_move_prob, long_move_len, width, height, sequential)
        base = 2 * n + 4 * n_cops
        n_events, _ = sweep_tick(
            civ_x, civ_y, flags, arrest_count, ever_j, ever_r,
            cop_x, cop_y, stigma,
            row[base:base + n], row[base + n:base + 2 * n], row[base + 2 * n:base + 3 * n],
            arrest_rate, sentencing_rate, recidivism_rate,
            bump_center, bump_neighbor, n_per_group, tick0 + t, events, n_events)
    return n_events
