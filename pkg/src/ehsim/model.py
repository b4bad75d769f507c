"""Core model of a block-structured energy-harvesting transmitter.

All quantities are per block, with the symbol count inside a block
normalised to one: a block that harvests energy ``e`` and transmits at power
``q`` changes the stored charge by ``e - q``.  Transmitters start empty, and
energy may never be spent before it has been harvested; the only slack
allowed in that comparison is a tiny absolute tolerance that absorbs float
rounding over long horizons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .policies import fast_trace_powers

_LN2 = math.log(2.0)


class CausalityError(ValueError):
    """A schedule tried to spend energy before it was harvested."""

    def __init__(self, block: int, power: float, available: float):
        self.block = block
        self.power = power
        self.available = available
        super().__init__(
            f"block {block}: power {power!r} exceeds available energy {available!r}"
        )


@dataclass(frozen=True)
class SimConfig:
    """Numeric conventions shared by every simulation.

    ``log_base`` selects the rate unit: "2" for bits per block, "e" for
    nats.  ``tol`` is the absolute slack used in every energy comparison;
    rounding noise below it is forgiven, anything larger is a real
    violation.
    """

    log_base: str = "2"
    tol: float = 1e-9

    def __post_init__(self):
        if self.log_base not in ("2", "e"):
            raise ValueError(f"log_base must be '2' or 'e', got {self.log_base!r}")
        if not 0.0 < self.tol <= 1e-9:
            raise ValueError(f"tol must lie in (0, 1e-9], got {self.tol!r}")

    @property
    def log_divisor(self) -> float:
        return _LN2 if self.log_base == "2" else 1.0


DEFAULT_CONFIG = SimConfig()


@dataclass(frozen=True)
class EnergyTrace:
    """A realised sequence of per-block harvested energies."""

    arrivals: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.arrivals, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("a trace needs at least one block")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise ValueError("arrivals must be finite and non-negative")
        object.__setattr__(self, "arrivals", arr)

    @property
    def length(self) -> int:
        return int(self.arrivals.size)

    def mean(self) -> float:
        return float(np.mean(self.arrivals))


@dataclass(frozen=True)
class BatteryState:
    """Stored energy at a block boundary.  Fresh transmitters start empty."""

    charge: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.charge) or self.charge < 0.0:
            raise ValueError(
                f"battery charge must be finite and >= 0, got {self.charge!r}"
            )


@dataclass(frozen=True)
class PolicySchedule:
    """Per-block powers and the rates they buy, as produced by execute()."""

    powers: np.ndarray
    rates: np.ndarray

    @property
    def length(self) -> int:
        return int(self.powers.size)


def rate(power: float, config: SimConfig = DEFAULT_CONFIG) -> float:
    """Rate bought by one block sent at ``power`` over unit-variance noise.

    Half the log of ``1 + power`` in the configured base.  Zero power buys
    zero rate; negative or non-finite power is a domain error.
    """
    power = float(power)
    if not math.isfinite(power) or power < 0.0:
        raise ValueError(f"power must be finite and >= 0, got {power!r}")
    return 0.5 * math.log1p(power) / config.log_divisor


def _rates_of(powers: np.ndarray, config: SimConfig) -> np.ndarray:
    # element-for-element the same computation as rate(); numpy's log1p can
    # differ from libm in the last bit, so stay on math.log1p for both paths
    log1p = math.log1p
    divisor = config.log_divisor
    return np.array([0.5 * log1p(q) / divisor for q in powers.tolist()], dtype=float)


def _step_charge(charge: float, arrival: float, power: float, tol: float, block: int) -> float:
    new = charge + arrival - power
    if new < 0.0:
        if new < -tol:
            raise CausalityError(block, power, charge + arrival)
        new = 0.0  # sub-tolerance float dip; the battery is really just empty
    return new


def step_battery(
    battery: BatteryState,
    arrival: float,
    power: float,
    config: SimConfig = DEFAULT_CONFIG,
    block: int = 1,
) -> BatteryState:
    """Advance the battery one block: bank ``arrival``, spend ``power``.

    Spending more than charge plus arrival (beyond ``config.tol``) raises
    CausalityError naming the offending block.
    """
    arrival = float(arrival)
    power = float(power)
    if not math.isfinite(arrival) or arrival < 0.0:
        raise ValueError(f"arrival must be finite and >= 0, got {arrival!r}")
    if not math.isfinite(power) or power < 0.0:
        raise ValueError(f"power must be finite and >= 0, got {power!r}")
    return BatteryState(_step_charge(battery.charge, arrival, power, config.tol, block))


def throughput(schedule: PolicySchedule) -> float:
    """Average per-block rate of a schedule."""
    n = int(schedule.rates.size)
    if n < 1:
        raise ValueError("cannot average an empty schedule")
    return math.fsum(schedule.rates) / n


def upper_bound(trace: EnergyTrace, config: SimConfig = DEFAULT_CONFIG) -> float:
    """Best throughput any feasible schedule could reach on this trace.

    The rate curve is concave, so no split of the harvested energy beats
    spending it perfectly evenly: the bound is the rate at the mean arrival.
    """
    return rate(float(np.mean(trace.arrivals)), config)


def schedule_from_powers(
    trace: EnergyTrace, powers, config: SimConfig = DEFAULT_CONFIG
) -> PolicySchedule:
    """Validate a power sequence against a trace and price it into rates.

    Checks shape, sign, and prefix feasibility (cumulative spend never ahead
    of cumulative harvest by more than ``config.tol``; the comparison runs on
    the running surplus so its rounding stays at battery scale, not at
    total-harvest scale).  Also cross-checks the finished throughput against
    the concavity bound, which no valid simulation can exceed.
    """
    powers = np.asarray(powers, dtype=float)
    if powers.shape != trace.arrivals.shape:
        raise ValueError(
            f"power sequence has shape {powers.shape}, trace has {trace.arrivals.shape}"
        )
    if not np.all(np.isfinite(powers)):
        raise ValueError("powers must be finite")
    negative = np.nonzero(powers < 0.0)[0]
    if negative.size:
        first = int(negative[0])
        raise ValueError(f"negative power {powers[first]!r} at block {first + 1}")
    surplus = np.cumsum(trace.arrivals - powers)
    bad = np.nonzero(surplus < -config.tol)[0]
    if bad.size:
        first = int(bad[0])
        raise CausalityError(
            first + 1, float(powers[first]), float(surplus[first] + powers[first])
        )
    rates = _rates_of(powers, config)
    if math.fsum(rates) / powers.size > upper_bound(trace, config) + config.tol:
        raise RuntimeError("internal error: throughput exceeds the concavity bound")
    return PolicySchedule(powers=powers, rates=rates)


def _generic_trace_powers(trace: EnergyTrace, policy, config: SimConfig) -> list[float]:
    horizon = trace.length
    tol = config.tol
    charge = 0.0
    powers = []
    for i, arrival in enumerate(trace.arrivals.tolist()):
        q = float(policy.power(charge, arrival, i + 1, horizon))
        if not math.isfinite(q) or q < 0.0:
            raise ValueError(f"policy returned invalid power {q!r} at block {i + 1}")
        charge = _step_charge(charge, arrival, q, tol, i + 1)
        powers.append(q)
    return powers


def execute(trace: EnergyTrace, policy, config: SimConfig = DEFAULT_CONFIG) -> PolicySchedule:
    """Run a policy over a trace block by block and collect its schedule.

    Policies with a recognised ``kind`` run through a specialised loop; any
    other object just needs a ``power(charge, arrival, block, horizon)``
    method and is driven generically, starting from an empty battery.  Either
    way the result is re-validated against the trace before it is returned.
    """
    powers = fast_trace_powers(policy, trace.arrivals)
    if powers is None:
        powers = _generic_trace_powers(trace, policy, config)
    return schedule_from_powers(trace, powers, config)
