"""Jit-compiled tick kernel. Mirrors _kernels_numpy.run_chunk exactly.

Importing this module requires numba. The loop structure is scalar rather
than vectorized, but every uniform draw is read from the same position of the
pre-generated layout and every float operation happens in the same order as
in the numpy backend, so both produce bit-identical trajectories.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# same fixed Moore enumeration order as _kernels_numpy.DIRS
_DX = np.array([-1, -1, -1, 0, 0, 1, 1, 1], dtype=np.int64)
_DY = np.array([-1, 0, 1, -1, 1, -1, 0, 1], dtype=np.int64)


@njit(cache=True)
def _bump(stigma, x, y, bump_center, bump_neighbor, width, height):
    stigma[x, y] += bump_center
    for d in range(8):
        x2 = x + _DX[d]
        y2 = y + _DY[d]
        if 0 <= x2 < width and 0 <= y2 < height:
            stigma[x2, y2] += bump_neighbor


@njit(cache=True)
def run_chunk(draws, civ_x, civ_y, flags, arrest_count, ever_j, ever_r,
              cop_x, cop_y, stigma, events, tick0, n_per_group, half,
              width, height, theta, long_move_prob, long_move_len, crime_rate,
              arrest_rate, sentencing_rate, recidivism_rate,
              bump_center, bump_neighbor, sequential):
    n = civ_x.shape[0]
    n_cops = cop_x.shape[0]
    ticks = draws.shape[0]
    cop_base = 2 * n
    arrest_base = 2 * n + 4 * n_cops
    tie_x = np.empty(8, dtype=np.int64)
    tie_y = np.empty(8, dtype=np.int64)
    n_events = 0

    for t in range(ticks):
        # civilians: move to a uniform valid Moore neighbor, then crime draws
        for i in range(n):
            if i < n_per_group:
                lo = 0
                hi = half - 1
            else:
                lo = half
                hi = width - 1
            x = civ_x[i]
            y = civ_y[i]
            k = 0
            for d in range(8):
                x2 = x + _DX[d]
                y2 = y + _DY[d]
                if lo <= x2 <= hi and 0 <= y2 < height:
                    k += 1
            if k == 0:
                continue
            j = int(draws[t, i] * k)
            if j > k - 1:
                j = k - 1
            seen = 0
            for d in range(8):
                x2 = x + _DX[d]
                y2 = y + _DY[d]
                if lo <= x2 <= hi and 0 <= y2 < height:
                    if seen == j:
                        civ_x[i] = x2
                        civ_y[i] = y2
                        break
                    seen += 1
        for i in range(n):
            flags[i] = draws[t, n + i] < crime_rate

        # cops: stigma-following move with probability theta, else (or also,
        # under the sequential rule) the random move
        for c in range(n_cops):
            u_rule = draws[t, cop_base + 4 * c]
            u_tie = draws[t, cop_base + 4 * c + 1]
            u_dir = draws[t, cop_base + 4 * c + 2]
            u_long = draws[t, cop_base + 4 * c + 3]
            x = cop_x[c]
            y = cop_y[c]
            follow = u_rule < theta
            if follow:
                best = -1.0
                m = 0
                for d in range(8):
                    x2 = x + _DX[d]
                    y2 = y + _DY[d]
                    if 0 <= x2 < width and 0 <= y2 < height:
                        s = stigma[x2, y2]
                        if s > best:
                            best = s
                            tie_x[0] = x2
                            tie_y[0] = y2
                            m = 1
                        elif s == best:
                            tie_x[m] = x2
                            tie_y[m] = y2
                            m += 1
                pick = int(u_tie * m)
                if pick > m - 1:
                    pick = m - 1
                x = tie_x[pick]
                y = tie_y[pick]
            if sequential or not follow:
                d = int(u_dir * 8)
                if d > 7:
                    d = 7
                steps = long_move_len if u_long < long_move_prob else 1
                x = min(max(x + steps * _DX[d], 0), width - 1)
                y = min(max(y + steps * _DY[d], 0), height - 1)
            cop_x[c] = x
            cop_y[c] = y

        # arrests in civilian-id order; one combined draw per civilian over
        # its k adjacent cops
        for i in range(n):
            if not flags[i]:
                continue
            x = civ_x[i]
            y = civ_y[i]
            k = 0
            for c in range(n_cops):
                if abs(cop_x[c] - x) <= 1 and abs(cop_y[c] - y) <= 1:
                    k += 1
            if k == 0:
                continue
            miss = 1.0
            for _ in range(k):
                miss *= 1.0 - arrest_rate
            if draws[t, arrest_base + i] >= 1.0 - miss:
                continue
            judged = draws[t, arrest_base + n + i] < sentencing_rate
            recid = draws[t, arrest_base + 2 * n + i] < recidivism_rate
            events[n_events, 0] = tick0 + t
            events[n_events, 1] = i
            events[n_events, 2] = 1 if i < n_per_group else 2
            events[n_events, 3] = x
            events[n_events, 4] = y
            events[n_events, 5] = 1 if judged else 0
            events[n_events, 6] = 1 if recid else 0
            n_events += 1
            _bump(stigma, x, y, bump_center, bump_neighbor, width, height)
            flags[i] = False
            arrest_count[i] += 1
            if judged:
                ever_j[i] = True
            if recid:
                ever_r[i] = True

    return n_events
