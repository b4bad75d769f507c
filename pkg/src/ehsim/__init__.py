"""Throughput simulator for a block-structured energy-harvesting transmitter.

Simulates online power policies (spend-as-you-go, save-and-transmit,
best-effort, adaptive) against i.i.d. energy-arrival traces under strict
energy causality, alongside the offline even-spending schedule and the
concavity upper bound, and compares their average rates across Monte Carlo
sweeps.
"""

from .arrivals import (
    Bernoulli,
    Constant,
    DistributionSpec,
    Empirical,
    Exponential,
    Uniform,
    distribution_from_mapping,
    parse_distribution,
    sample_trace,
)
from .model import (
    DEFAULT_CONFIG,
    BatteryState,
    CausalityError,
    EnergyTrace,
    PolicySchedule,
    SimConfig,
    execute,
    rate,
    schedule_from_powers,
    step_battery,
    throughput,
    upper_bound,
)
from .montecarlo import (
    POLICY_CHOICES,
    PolicyStat,
    SweepPlan,
    SweepResult,
    evaluate_policies,
    run_sweep,
)
from .opm import OpmSchedule, opm_oracle, opm_schedule
from .policies import (
    ONLINE_POLICY_KINDS,
    Policy,
    PolicyParams,
    apa_power,
    bet_power,
    naive_power,
    params_from_mean,
    sat_power,
    save_phase_length,
)

__version__ = "0.1.0"

__all__ = [
    "BatteryState",
    "Bernoulli",
    "CausalityError",
    "Constant",
    "DEFAULT_CONFIG",
    "DistributionSpec",
    "Empirical",
    "EnergyTrace",
    "Exponential",
    "ONLINE_POLICY_KINDS",
    "OpmSchedule",
    "POLICY_CHOICES",
    "Policy",
    "PolicyParams",
    "PolicySchedule",
    "PolicyStat",
    "SimConfig",
    "SweepPlan",
    "SweepResult",
    "Uniform",
    "apa_power",
    "bet_power",
    "distribution_from_mapping",
    "evaluate_policies",
    "execute",
    "naive_power",
    "opm_oracle",
    "opm_schedule",
    "params_from_mean",
    "parse_distribution",
    "rate",
    "sample_trace",
    "sat_power",
    "save_phase_length",
    "schedule_from_powers",
    "step_battery",
    "throughput",
    "upper_bound",
]
