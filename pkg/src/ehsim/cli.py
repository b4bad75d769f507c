"""Command-line front end: single-trace runs and replicated sweeps.

``ehsim run`` scores the configured policies on one sampled trace and prints
a throughput table; ``ehsim sweep`` aggregates replicated runs across a mean
or horizon grid and writes plot-ready CSV.  Flags override config-file
values, which override the built-in defaults; the seed falls back to the
EH_SIM_SEED environment variable before defaulting to 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np
import yaml

from .arrivals import (
    DistributionSpec,
    distribution_from_mapping,
    parse_distribution,
    sample_trace,
)
from .model import SimConfig, execute, schedule_from_powers, throughput, upper_bound
from .montecarlo import (
    DEFAULT_MEAN_GRID,
    DEFAULT_REPLICATIONS,
    POLICY_CHOICES,
    SweepPlan,
    run_sweep,
)
from .opm import opm_schedule
from .policies import Policy, params_from_mean, save_phase_length

ENV_SEED = "EH_SIM_SEED"

_CONFIG_KEYS = (
    "dist",
    "L",
    "reps",
    "seed",
    "policies",
    "epsilon_rel",
    "sat_alpha",
    "log_base",
    "out",
    "format",
    "schedule_out",
    "mean_sweep",
    "L_sweep",
)

SWEEP_CSV_HEADER = "sweep_param,value,policy,mean_throughput,stddev,stderr,replications"


@dataclass
class Settings:
    command: str
    dist: DistributionSpec
    L: int
    seed: int
    reps: int
    policies: tuple
    epsilon_rel: float
    sat_alpha: float
    config: SimConfig
    out: str
    format: str
    schedule_out: str | None
    mean_sweep: tuple | None
    L_sweep: tuple | None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehsim",
        description="Throughput simulator for an energy-harvesting transmitter.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON or YAML config file; flags override it")
        p.add_argument(
            "--dist",
            help="arrival distribution, kind:params "
            "(exponential:10, bernoulli:10,0.5, constant:5, uniform:0,20, empirical:1,2,3)",
        )
        p.add_argument("--L", type=int, help="trace length in blocks (default 500)")
        p.add_argument("--seed", type=int, help=f"base seed (default ${ENV_SEED} or 0)")
        p.add_argument(
            "--policies",
            help=f"comma list from {','.join(POLICY_CHOICES)} (default all)",
        )
        p.add_argument(
            "--epsilon-rel",
            type=float,
            help="relative margin below the mean for the target power (default 0.01)",
        )
        p.add_argument(
            "--sat-alpha",
            type=float,
            help="save-phase exponent for the sat policy (default 0.5)",
        )
        p.add_argument("--log-base", choices=["2", "e"], help="rate unit (default 2)")
        p.add_argument("--out", help="output path, '-' for stdout")
        p.add_argument("--format", choices=["csv", "json", "table"], help="output format")

    run_p = sub.add_parser("run", help="score the policies on one sampled trace")
    common(run_p)
    run_p.add_argument("--schedule-out", help="also write the per-block schedules as CSV")

    sweep_p = sub.add_parser("sweep", help="replicated sweep over a mean or horizon grid")
    common(sweep_p)
    sweep_p.add_argument("--mean-sweep", help="comma list of mean arrival rates")
    sweep_p.add_argument("--L-sweep", help="comma list of horizons")
    sweep_p.add_argument("--reps", type=int, help="replications per sweep point (default 200)")
    return parser


def _load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith((".yaml", ".yml")):
        data = yaml.safe_load(text)
    else:
        data = json.loads(text)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a mapping at the top level")
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise ValueError(f"unknown config keys {unknown}; valid keys: {list(_CONFIG_KEYS)}")
    return data


def _parse_policies(value) -> tuple:
    if isinstance(value, str):
        names = [tok.strip() for tok in value.split(",") if tok.strip()]
    else:
        names = [str(tok) for tok in value]
    if not names:
        raise ValueError("policy list is empty")
    unknown = [n for n in names if n not in POLICY_CHOICES]
    if unknown:
        raise ValueError(f"unknown policies {unknown}; choose from {list(POLICY_CHOICES)}")
    return tuple(dict.fromkeys(names))


def _parse_grid(value, as_int: bool) -> tuple:
    if isinstance(value, str):
        tokens = [tok.strip() for tok in value.split(",") if tok.strip()]
    else:
        tokens = list(value)
    if not tokens:
        raise ValueError("sweep grid is empty")
    out = []
    for tok in tokens:
        out.append(int(tok) if as_int else float(tok))
    return tuple(sorted(set(out)))


def _resolve(args: argparse.Namespace) -> Settings:
    file_cfg = _load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag_name, key, default):
        flag = getattr(args, flag_name, None)
        if flag is not None:
            return flag
        if key in file_cfg:
            return file_cfg[key]
        return default

    dist_value = pick("dist", "dist", "exponential:10")
    if isinstance(dist_value, dict):
        dist = distribution_from_mapping(dist_value)
    else:
        dist = parse_distribution(str(dist_value))

    seed = getattr(args, "seed", None)
    if seed is None:
        seed = file_cfg.get("seed")
    if seed is None:
        seed = int(os.environ.get(ENV_SEED, "0"))
    seed = int(seed)

    mean_sweep = pick("mean_sweep", "mean_sweep", None)
    l_sweep = pick("L_sweep", "L_sweep", None)
    if mean_sweep is not None and l_sweep is not None:
        raise ValueError("choose either --mean-sweep or --L-sweep, not both")

    default_format = "table" if args.command == "run" else "csv"
    return Settings(
        command=args.command,
        dist=dist,
        L=int(pick("L", "L", 500)),
        seed=seed,
        reps=int(pick("reps", "reps", DEFAULT_REPLICATIONS)),
        policies=_parse_policies(pick("policies", "policies", ",".join(POLICY_CHOICES))),
        epsilon_rel=float(pick("epsilon_rel", "epsilon_rel", 0.01)),
        sat_alpha=float(pick("sat_alpha", "sat_alpha", 0.5)),
        config=SimConfig(log_base=str(pick("log_base", "log_base", "2"))),
        out=str(pick("out", "out", "-")),
        format=str(pick("format", "format", default_format)),
        schedule_out=pick("schedule_out", "schedule_out", None),
        mean_sweep=None if mean_sweep is None else _parse_grid(mean_sweep, as_int=False),
        L_sweep=None if l_sweep is None else _parse_grid(l_sweep, as_int=True),
    )


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _num(value) -> str:
    # repr round-trips floats exactly; ints stay bare
    return repr(value) if isinstance(value, float) else str(value)


def cmd_run(settings: Settings) -> int:
    trace = sample_trace(settings.dist, settings.L, settings.seed)
    params = params_from_mean(
        settings.dist.mean(), settings.epsilon_rel, settings.sat_alpha
    )
    results = {}
    schedules = {}
    for kind in settings.policies:
        if kind == "ub":
            results[kind] = upper_bound(trace, settings.config)
        elif kind == "opm":
            schedule = schedule_from_powers(
                trace, opm_schedule(trace).powers, settings.config
            )
            schedules[kind] = schedule
            results[kind] = throughput(schedule)
        else:
            schedule = execute(trace, Policy(kind, params), settings.config)
            schedules[kind] = schedule
            results[kind] = throughput(schedule)

    sat_skips = None
    if "sat" in schedules:
        silent = save_phase_length(trace.length, settings.sat_alpha)
        sat_skips = int(np.count_nonzero(schedules["sat"].powers[silent:] == 0.0))

    if settings.format == "csv":
        lines = ["policy,throughput"]
        lines += [f"{kind},{value!r}" for kind, value in results.items()]
        text = "\n".join(lines) + "\n"
    elif settings.format == "json":
        entries = []
        for kind, value in results.items():
            entry = {"policy": kind, "throughput": value}
            if kind == "sat" and sat_skips is not None:
                entry["transmit_skips"] = sat_skips
            entries.append(entry)
        payload = {
            "distribution": {"kind": settings.dist.kind, "mean": settings.dist.mean()},
            "horizon": settings.L,
            "seed": settings.seed,
            "log_base": settings.config.log_base,
            "results": entries,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        width = max(len("policy"), *(len(k) for k in results))
        lines = [f"{'policy':<{width}}  throughput"]
        lines += [f"{kind:<{width}}  {value!r}" for kind, value in results.items()]
        if sat_skips is not None:
            lines.append(f"# sat skipped {sat_skips} transmit-phase block(s)")
        text = "\n".join(lines) + "\n"
    _emit(text, settings.out)

    if settings.schedule_out:
        lines = ["policy,block,arrival,power,rate"]
        arrivals = trace.arrivals.tolist()
        for kind, schedule in schedules.items():
            for i, (q, r) in enumerate(zip(schedule.powers.tolist(), schedule.rates.tolist())):
                lines.append(f"{kind},{i + 1},{arrivals[i]!r},{q!r},{r!r}")
        _emit("\n".join(lines) + "\n", settings.schedule_out)
    return 0


def render_sweep(result, fmt: str) -> str:
    """Render a SweepResult as csv, json, or an aligned table."""
    if fmt == "json":
        rows = [
            {
                "sweep_param": row.sweep_param,
                "value": row.value,
                "policy": row.policy,
                "mean_throughput": row.mean_throughput,
                "stddev": row.stddev,
                "stderr": row.stderr,
                "replications": row.replications,
            }
            for row in result.rows
        ]
        return json.dumps({"rows": rows}, indent=2) + "\n"
    if fmt == "table":
        header = ("sweep_param", "value", "policy", "mean_throughput", "stddev", "stderr", "reps")
        cells = [
            (
                row.sweep_param,
                _num(row.value),
                row.policy,
                f"{row.mean_throughput:.6f}",
                f"{row.stddev:.6f}",
                f"{row.stderr:.6f}",
                str(row.replications),
            )
            for row in result.rows
        ]
        widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
        return "\n".join(lines) + "\n"
    lines = [SWEEP_CSV_HEADER]
    for row in result.rows:
        lines.append(
            f"{row.sweep_param},{_num(row.value)},{row.policy},"
            f"{row.mean_throughput!r},{row.stddev!r},{row.stderr!r},{row.replications}"
        )
    return "\n".join(lines) + "\n"


def cmd_sweep(settings: Settings) -> int:
    if settings.L_sweep is not None:
        swept, values = "horizon", settings.L_sweep
    else:
        swept, values = "mean", settings.mean_sweep or DEFAULT_MEAN_GRID
    plan = SweepPlan(
        distribution=settings.dist,
        swept=swept,
        values=values,
        horizon=settings.L,
        replications=settings.reps,
        base_seed=settings.seed,
        policies=settings.policies,
        epsilon_rel=settings.epsilon_rel,
        sat_alpha=settings.sat_alpha,
        config=settings.config,
    )
    result = run_sweep(plan)
    _emit(render_sweep(result, settings.format), settings.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _resolve(args)
        if settings.command == "run":
            return cmd_run(settings)
        return cmd_sweep(settings)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
