"""Offline power schedule: spend the harvest as evenly as causality allows.

With the whole trace known in advance and an unlimited battery, the best
schedule for a concave rate curve is the taut-string solution: pull the
cumulative-spend curve straight from zero to the total harvest, bending only
where it would otherwise outrun the cumulative-harvest curve.  The resulting
powers form a non-decreasing staircase that exhausts the harvest, and every
step up happens exactly where the budget was about to be overrun.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import DEFAULT_CONFIG, EnergyTrace, SimConfig, rate

ORACLE_MAX_BLOCKS = 6


@dataclass(frozen=True)
class OpmSchedule:
    """Non-decreasing offline power staircase for one trace.

    ``change_points`` lists the 0-based blocks whose power strictly exceeds
    the previous block's; just before each one, the schedule has spent the
    harvest to the last drop.
    """

    powers: np.ndarray
    change_points: tuple


def opm_schedule(trace: EnergyTrace) -> OpmSchedule:
    """Most-even feasible power profile that uses the whole harvest.

    Greedy stretch construction: from the current block, take the longest
    prefix whose running average is minimal, hold that average as a constant
    power across the stretch, and continue after it.  Every later stretch
    averages strictly higher (ties were folded into the current stretch), so
    the staircase never steps down.
    """
    arrivals = trace.arrivals
    n = arrivals.size
    # Prefix sums in extended precision so stretch-average comparisons are
    # not polluted by rounding at total-harvest scale; each emitted level is
    # then recomputed as the exactly rounded float mean of its own stretch.
    prefix = np.concatenate(([0.0], np.cumsum(arrivals, dtype=np.longdouble)))
    powers = np.empty(n, dtype=float)
    change_points = []
    start = 0
    while start < n:
        sums = prefix[start + 1 :] - prefix[start]
        averages = sums / np.arange(1, n - start + 1, dtype=np.longdouble)
        # last index attaining the minimum: the longest, flattest stretch
        stop = n - int(np.argmin(averages[::-1]))
        width = stop - start
        level = math.fsum(arrivals[start:stop].tolist()) / width
        powers[start:stop] = level
        if start > 0 and level > powers[start - 1]:
            change_points.append(start)
        start = stop
    return OpmSchedule(powers=powers, change_points=tuple(change_points))


def opm_oracle(
    trace: EnergyTrace, grid_step: float, config: SimConfig = DEFAULT_CONFIG
):
    """Exhaustive search over grid-valued feasible schedules for tiny traces.

    Independent check on opm_schedule: dynamic programming over
    (block, energy-spent-so-far) in integer grid units, maximising the summed
    rate subject to the prefix budgets.  Returns (powers, throughput).
    """
    n = trace.length
    if n > ORACLE_MAX_BLOCKS:
        raise ValueError(f"oracle search handles at most {ORACLE_MAX_BLOCKS} blocks, got {n}")
    grid_step = float(grid_step)
    if not math.isfinite(grid_step) or grid_step <= 0.0:
        raise ValueError(f"grid_step must be positive, got {grid_step!r}")
    # prefix budgets in grid units; the tiny slack keeps on-grid harvests exact
    caps = [
        int(math.floor(h / grid_step + 1e-9)) for h in np.cumsum(trace.arrivals)
    ]
    rate_table = [rate(k * grid_step, config) for k in range(caps[-1] + 1)]

    @lru_cache(maxsize=None)
    def solve(block: int, spent: int):
        if block == n:
            return 0.0, ()
        best_total = -1.0
        best_tail = ()
        for k in range(caps[block] - spent + 1):
            total, tail = solve(block + 1, spent + k)
            total += rate_table[k]
            if total > best_total:
                best_total = total
                best_tail = (k,) + tail
        return best_total, best_tail

    total, units = solve(0, 0)
    solve.cache_clear()
    powers = np.array([k * grid_step for k in units], dtype=float)
    return powers, total / n
