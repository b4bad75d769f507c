"""Replicated policy comparisons across parameter sweeps.

One sweep point is one distribution/horizon setting.  Every policy, the
offline schedule, and the mean-rate upper bound are scored on the same
replicated traces (replication ``r`` draws from seed ``base_seed + r``), so
policy comparisons share their randomness and reruns are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrivals import DistributionSpec, sample_trace
from .model import (
    DEFAULT_CONFIG,
    EnergyTrace,
    SimConfig,
    execute,
    schedule_from_powers,
    throughput,
    upper_bound,
)
from .opm import opm_schedule
from .policies import Policy, PolicyParams, params_from_mean

POLICY_CHOICES = ("naive", "sat", "bet", "apa", "opm", "ub")

DEFAULT_MEAN_GRID = (1.0, 2.0, 5.0, 10.0, 20.0)
DEFAULT_HORIZON_GRID = (50, 100, 200, 500, 1000, 2000, 5000)
DEFAULT_HORIZON = 500
DEFAULT_REPLICATIONS = 200


def evaluate_policies(
    trace: EnergyTrace,
    kinds,
    params: PolicyParams,
    config: SimConfig = DEFAULT_CONFIG,
) -> dict:
    """Throughput of each requested policy kind on one shared trace.

    ``opm`` runs the offline schedule, ``ub`` the concavity bound; the other
    kinds are simulated online with the given parameters.
    """
    out = {}
    for kind in kinds:
        if kind == "ub":
            out[kind] = upper_bound(trace, config)
        elif kind == "opm":
            schedule = schedule_from_powers(trace, opm_schedule(trace).powers, config)
            out[kind] = throughput(schedule)
        else:
            out[kind] = throughput(execute(trace, Policy(kind, params), config))
    return out


@dataclass(frozen=True)
class SweepPlan:
    """Everything needed to reproduce one sweep bit for bit."""

    distribution: DistributionSpec
    swept: str  # "mean" or "horizon"
    values: tuple
    horizon: int = DEFAULT_HORIZON
    replications: int = DEFAULT_REPLICATIONS
    base_seed: int = 0
    policies: tuple = POLICY_CHOICES
    epsilon_rel: float = 0.01
    sat_alpha: float = 0.5
    config: SimConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.swept not in ("mean", "horizon"):
            raise ValueError(f"swept must be 'mean' or 'horizon', got {self.swept!r}")
        values = tuple(self.values)
        if not values:
            raise ValueError("a sweep needs at least one value")
        if any(not math.isfinite(v) or v <= 0 for v in values):
            raise ValueError("sweep values must be positive and finite")
        object.__setattr__(self, "values", values)
        policies = tuple(self.policies)
        unknown = [p for p in policies if p not in POLICY_CHOICES]
        if unknown or not policies:
            raise ValueError(
                f"policies must be a non-empty subset of {POLICY_CHOICES}, got {policies!r}"
            )
        object.__setattr__(self, "policies", policies)
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications!r}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon!r}")


@dataclass(frozen=True)
class PolicyStat:
    """Aggregate throughput of one policy at one sweep value."""

    sweep_param: str
    value: float
    policy: str
    mean_throughput: float
    stddev: float
    stderr: float
    replications: int


@dataclass(frozen=True)
class SweepResult:
    """Aggregated statistics plus the raw per-replication samples."""

    plan: SweepPlan
    rows: tuple
    samples: dict  # (value, policy) -> tuple of per-replication throughputs

    def sample(self, value, policy):
        return self.samples[(value, policy)]


def run_sweep(plan: SweepPlan) -> SweepResult:
    """Score every configured policy on common replicated traces per sweep value.

    The upper bound is evaluated at every point whether or not "ub" was
    requested, so each policy mean can be checked against it; sample standard
    deviations use the n-1 convention and the standard error divides by
    sqrt(replications).
    """
    config = plan.config
    scored = list(dict.fromkeys(list(plan.policies) + ["ub"]))
    rows = []
    samples = {}
    for value in plan.values:
        if plan.swept == "mean":
            dist = plan.distribution.with_mean(float(value))
            horizon = plan.horizon
        else:
            dist = plan.distribution
            horizon = int(value)
        params = params_from_mean(dist.mean(), plan.epsilon_rel, plan.sat_alpha)
        tps = {kind: np.empty(plan.replications) for kind in scored}
        for r in range(plan.replications):
            trace = sample_trace(dist, horizon, plan.base_seed + r)
            for kind, tp in evaluate_policies(trace, scored, params, config).items():
                tps[kind][r] = tp
        ub_mean = float(np.mean(tps["ub"]))
        for kind in scored:
            samples[(value, kind)] = tuple(tps[kind].tolist())
            if float(np.mean(tps[kind])) > ub_mean + config.tol:
                raise RuntimeError(
                    f"internal error: mean {kind} throughput exceeds the mean upper bound"
                )
        for kind in plan.policies:
            arr = tps[kind]
            mean = float(np.mean(arr))
            stddev = float(np.std(arr, ddof=1)) if plan.replications > 1 else 0.0
            rows.append(
                PolicyStat(
                    sweep_param=plan.swept,
                    value=value,
                    policy=kind,
                    mean_throughput=mean,
                    stddev=stddev,
                    stderr=stddev / math.sqrt(plan.replications),
                    replications=plan.replications,
                )
            )
    return SweepResult(plan=plan, rows=tuple(rows), samples=samples)
