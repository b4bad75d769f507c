"""Online transmit-power policies.

Every rule here is causal: a decision for block ``l`` may look only at the
battery charge entering the block, the energy that arrives during it, the
block index, the horizon, and fixed parameters.  The target power is
normally set a small relative margin below the mean arrival rate, which is
the only distributional knowledge a transmitter is assumed to have.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

ONLINE_POLICY_KINDS = ("naive", "sat", "bet", "apa")


@dataclass(frozen=True)
class PolicyParams:
    """Knobs shared by the threshold policies.

    ``target_power`` is the constant power level the policy tries to hold.
    ``sat_alpha`` shapes the save phase of the save-and-transmit rule: the
    first ``ceil(horizon ** sat_alpha)`` blocks stay silent.
    """

    target_power: float
    sat_alpha: float = 0.5

    def __post_init__(self):
        if not math.isfinite(self.target_power) or self.target_power < 0.0:
            raise ValueError(
                f"target_power must be finite and >= 0, got {self.target_power!r}"
            )
        if not 0.0 < self.sat_alpha < 1.0:
            raise ValueError(f"sat_alpha must lie in (0, 1), got {self.sat_alpha!r}")


def params_from_mean(
    mean_arrival: float, epsilon_rel: float = 0.01, sat_alpha: float = 0.5
) -> PolicyParams:
    """Standard parameter choice: target the mean arrival minus a relative margin."""
    if not math.isfinite(mean_arrival) or mean_arrival < 0.0:
        raise ValueError(f"mean_arrival must be finite and >= 0, got {mean_arrival!r}")
    if not 0.0 <= epsilon_rel <= 1.0:
        raise ValueError(f"epsilon_rel must lie in [0, 1], got {epsilon_rel!r}")
    return PolicyParams(
        target_power=mean_arrival * (1.0 - epsilon_rel), sat_alpha=sat_alpha
    )


def save_phase_length(horizon: int, alpha: float) -> int:
    """Silent-block count for save-and-transmit: ceil(horizon ** alpha).

    Grows without bound yet is a vanishing fraction of the horizon, so the
    rate lost to silence disappears as horizons grow.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon!r}")
    return math.ceil(horizon**alpha)


def naive_power(charge: float, arrival: float) -> float:
    """Spend each arrival the moment it lands; the battery is never used."""
    return arrival


def bet_power(charge: float, arrival: float, params: PolicyParams) -> float:
    """Best-effort rule: send at the target power when affordable, else bank."""
    return params.target_power if charge + arrival >= params.target_power else 0.0


def apa_power(charge: float, arrival: float, params: PolicyParams) -> float:
    """Adaptive rule: send at the target power when affordable, else drain all.

    The fallback branch empties the battery, so an underpowered block always
    leaves zero charge behind.
    """
    available = charge + arrival
    return params.target_power if available >= params.target_power else available


def sat_power(
    charge: float, arrival: float, block: int, horizon: int, params: PolicyParams
) -> float:
    """Save-and-transmit rule: silence through the save phase, then best-effort.

    The affordability guard on the transmit phase protects the rare shortfall
    where the saved charge runs dry; the block is skipped instead of
    overdrawing the battery.
    """
    if block <= save_phase_length(horizon, params.sat_alpha):
        return 0.0
    return params.target_power if charge + arrival >= params.target_power else 0.0


@dataclass(frozen=True)
class Policy:
    """One named online rule plus its parameters.

    Block indices are 1-based.  ``power`` exposes the per-block decision for
    generic drivers; the simulation core recognises built-in kinds and runs
    an equivalent specialised loop instead.
    """

    kind: str
    params: PolicyParams | None = None

    def __post_init__(self):
        if self.kind not in ONLINE_POLICY_KINDS:
            raise ValueError(
                f"unknown policy kind {self.kind!r}; expected one of {ONLINE_POLICY_KINDS}"
            )
        if self.kind != "naive" and self.params is None:
            raise ValueError(f"policy {self.kind!r} needs parameters")

    def power(self, charge: float, arrival: float, block: int, horizon: int) -> float:
        if self.kind == "naive":
            return naive_power(charge, arrival)
        if self.kind == "bet":
            return bet_power(charge, arrival, self.params)
        if self.kind == "apa":
            return apa_power(charge, arrival, self.params)
        return sat_power(charge, arrival, block, horizon, self.params)


def fast_trace_powers(policy, arrivals):
    """Whole-trace power sequence for built-in kinds, or None if unrecognised.

    Keeps the exact float operation order of the per-block rules plus the
    battery recursion, so the fast loops and Policy.power cannot disagree
    even in the last bit.
    """
    kind = getattr(policy, "kind", None)
    if kind not in ONLINE_POLICY_KINDS:
        return None
    values = arrivals.tolist() if hasattr(arrivals, "tolist") else list(arrivals)
    if kind == "naive":
        return values
    target = policy.params.target_power
    powers = [0.0] * len(values)
    charge = 0.0
    if kind == "bet":
        for i, e in enumerate(values):
            available = charge + e
            if available >= target:
                powers[i] = target
                charge = available - target
            else:
                charge = available
    elif kind == "apa":
        for i, e in enumerate(values):
            available = charge + e
            if available >= target:
                powers[i] = target
                charge = available - target
            else:
                powers[i] = available
                charge = 0.0
    else:  # sat
        silent = save_phase_length(len(values), policy.params.sat_alpha)
        for i, e in enumerate(values):
            available = charge + e
            if i < silent:
                charge = available
            elif available >= target:
                powers[i] = target
                charge = available - target
            else:
                charge = available
    return powers
