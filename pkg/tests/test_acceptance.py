"""Acceptance gate: one test per release criterion, one printed line each.

Every tolerance and corpus size is asserted as stated; fixed seeds make each
verdict reproducible.  Run with ``pytest -s tests/test_acceptance.py`` to see
the lines as they print.
"""

from __future__ import annotations

import math
import time

import numpy as np

import ehsim as eh

R10 = 0.5 * math.log2(11.0)  # rate at the mean arrival used by the big runs
MAX_RATE_SLOPE = 0.5 / math.log(2.0)


def _verdict(number: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"[acceptance] criterion {number} {name}: {status}{suffix}")
    assert ok, f"criterion {number} {name}{suffix}"


def _fuzz_corpus():
    """10^4 (trace, policy) pairs over mixed distributions, L in [1, 200]."""
    master = np.random.default_rng(20250501)
    kinds = ("naive", "sat", "bet", "apa", "opm")
    for i in range(10_000):
        length = int(master.integers(1, 201))
        pick = int(master.integers(0, 4))
        if pick == 0:
            dist = eh.Exponential(float(master.uniform(0.5, 20.0)))
        elif pick == 1:
            dist = eh.Uniform(0.0, float(master.uniform(0.5, 30.0)))
        elif pick == 2:
            dist = eh.Bernoulli(
                float(master.uniform(1.0, 25.0)), float(master.uniform(0.05, 1.0))
            )
        else:
            dist = eh.Constant(float(master.uniform(0.0, 15.0)))
        trace = eh.sample_trace(dist, length, int(master.integers(0, 2**32)))
        yield trace, dist, kinds[i % len(kinds)]


def _schedule_for(trace, dist, kind):
    if kind == "opm":
        return eh.schedule_from_powers(trace, eh.opm_schedule(trace).powers)
    params = eh.params_from_mean(dist.mean(), 0.01, 0.5)
    return eh.execute(trace, eh.Policy(kind, params))


def test_criterion_1_throughput_never_beats_the_bound():
    start = time.perf_counter()
    worst = -math.inf
    count = 0
    for trace, dist, kind in _fuzz_corpus():
        schedule = _schedule_for(trace, dist, kind)
        tp = float(np.mean(schedule.rates))
        bound = 0.5 * math.log2(1.0 + float(np.mean(trace.arrivals)))
        worst = max(worst, tp - bound)
        count += 1
        if tp > bound + 1e-9:
            _verdict(1, "throughput-bound dominance", False, f"gap {tp - bound:.3e}")
    elapsed = time.perf_counter() - start
    _verdict(
        1,
        "throughput-bound dominance",
        count >= 10_000 and worst <= 1e-9 and elapsed < 10.0,
        f"{count} pairs, worst gap {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_2_causality_never_violated():
    start = time.perf_counter()
    count = 0
    for trace, dist, kind in _fuzz_corpus():
        schedule = _schedule_for(trace, dist, kind)
        spend = np.cumsum(schedule.powers)
        harvest = np.cumsum(trace.arrivals)
        if not np.all(spend <= harvest + 1e-9):
            _verdict(2, "causality under fuzz", False, f"prefix violation, {kind}")
        charge = 0.0
        for e, q in zip(trace.arrivals.tolist(), schedule.powers.tolist()):
            charge = charge + e - q
            if charge < -1e-9:
                _verdict(2, "causality under fuzz", False, f"battery {charge:.3e}")
            charge = max(charge, 0.0)
        count += 1
    elapsed = time.perf_counter() - start
    _verdict(
        2,
        "causality under fuzz",
        count >= 10_000 and elapsed < 10.0,
        f"{count} pairs, {elapsed:.1f}s",
    )


def test_criterion_3_long_horizon_approaches_the_mean_rate():
    dist = eh.Exponential(10.0)
    trace = eh.sample_trace(dist, 100_000, 12345)
    params = eh.params_from_mean(10.0, 0.01, 0.5)
    ok = True
    details = []
    for kind, floor in (("apa", 0.97), ("bet", 0.97), ("sat", 0.96)):
        start = time.perf_counter()
        tp = eh.throughput(eh.execute(trace, eh.Policy(kind, params)))
        elapsed = time.perf_counter() - start
        ok = ok and tp >= floor * R10 and elapsed < 5.0
        details.append(f"{kind} {tp:.4f}>={floor * R10:.4f} in {elapsed:.2f}s")
    _verdict(3, "long-horizon throughput", ok, "; ".join(details))


def _ordering_result():
    plan = eh.SweepPlan(
        distribution=eh.Exponential(10.0),
        swept="horizon",
        values=(500,),
        replications=200,
        base_seed=2000,
        policies=("sat", "bet", "apa", "opm", "ub"),
    )
    return eh.run_sweep(plan)


def test_criterion_4_policy_ordering_at_desk_scale():
    result = _ordering_result()
    samples = {k: np.array(result.sample(500, k)) for k in ("sat", "bet", "apa", "opm", "ub")}
    means = {k: float(np.mean(v)) for k, v in samples.items()}

    def gap_ok(hi, lo):
        diff = samples[hi] - samples[lo]
        stderr = float(np.std(diff, ddof=1)) / math.sqrt(diff.size)
        return float(np.mean(diff)) >= -stderr

    ok = (
        gap_ok("apa", "bet")
        and gap_ok("bet", "sat")
        and gap_ok("opm", "apa")
        and all(means[k] <= means["ub"] + 1e-9 for k in ("sat", "bet", "apa", "opm"))
    )
    detail = " <= ".join(f"{k} {means[k]:.4f}" for k in ("sat", "bet", "apa", "opm", "ub"))
    _verdict(4, "policy ordering", ok, detail)


def test_criterion_5_save_and_transmit_crossover():
    def point(length):
        plan = eh.SweepPlan(
            distribution=eh.Exponential(10.0),
            swept="horizon",
            values=(length,),
            replications=200,
            base_seed=2000,
            policies=("naive", "sat"),
        )
        rows = {row.policy: row for row in eh.run_sweep(plan).rows}
        return rows["naive"].mean_throughput, rows["sat"].mean_throughput

    naive_small, sat_small = point(50)
    naive_large, sat_large = point(2000)
    ok = naive_small > sat_small and sat_large > naive_large
    _verdict(
        5,
        "crossover",
        ok,
        f"L=50 naive {naive_small:.4f} > sat {sat_small:.4f}; "
        f"L=2000 sat {sat_large:.4f} > naive {naive_large:.4f}",
    )


def test_criterion_6_naive_throughput_is_horizon_flat():
    plan = eh.SweepPlan(
        distribution=eh.Exponential(10.0),
        swept="horizon",
        values=(50, 5000),
        replications=200,
        base_seed=2000,
        policies=("naive",),
    )
    rows = {row.value: row for row in eh.run_sweep(plan).rows}
    gap = abs(rows[50].mean_throughput - rows[5000].mean_throughput)
    combined = math.hypot(rows[50].stderr, rows[5000].stderr)
    _verdict(6, "naive flatness", gap < 3.0 * combined, f"gap {gap:.4f} < {3 * combined:.4f}")


def test_criterion_7_save_and_transmit_closed_form():
    ok = True
    details = []
    for c in (5.0, 10.0):
        for length in (10, 100, 1000):
            trace = eh.sample_trace(eh.Constant(c), length, 0)
            params = eh.params_from_mean(c, 0.01, 0.5)
            tp = eh.throughput(eh.execute(trace, eh.Policy("sat", params)))
            silent = eh.save_phase_length(length, 0.5)
            closed = (length - silent) / (2.0 * length) * math.log2(1.0 + params.target_power)
            err = abs(tp - closed)
            ok = ok and err <= 1e-12
            details.append(f"c={c:g},L={length}: {err:.1e}")
    _verdict(7, "closed-form check", ok, "; ".join(details))


def test_criterion_8_offline_schedule_vs_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(908070)
    slack = (0.05 / 2.0) * MAX_RATE_SLOPE
    dominance_ok = True
    for _ in range(50):
        length = int(rng.integers(2, 6))
        arr = rng.integers(0, 41, length) * 0.05
        if arr.sum() == 0.0:
            arr[0] = 0.05
        trace = eh.EnergyTrace(arr)
        _, oracle_tp = eh.opm_oracle(trace, 0.05)
        schedule_tp = eh.throughput(
            eh.schedule_from_powers(trace, eh.opm_schedule(trace).powers)
        )
        dominance_ok = dominance_ok and schedule_tp >= oracle_tp - slack

    invariants_ok = True
    for i in range(1000):
        length = int(rng.integers(1, 201))
        if i % 3 == 0:
            arr = rng.exponential(float(rng.uniform(0.5, 15.0)), length)
        elif i % 3 == 1:
            arr = rng.uniform(0.0, 10.0, length)
        else:
            arr = rng.integers(0, 13, length) * 0.25
        trace = eh.EnergyTrace(arr)
        schedule = eh.opm_schedule(trace)
        powers = schedule.powers
        invariants_ok = invariants_ok and bool(np.array_equal(np.sort(powers), powers))
        invariants_ok = (
            invariants_ok
            and abs(math.fsum(powers) - math.fsum(trace.arrivals)) <= 1e-9
        )
        for c in schedule.change_points:
            invariants_ok = (
                invariants_ok
                and abs(math.fsum(powers[:c]) - math.fsum(trace.arrivals[:c])) <= 1e-9
            )
    elapsed = time.perf_counter() - start
    _verdict(
        8,
        "offline schedule vs oracle",
        dominance_ok and invariants_ok and elapsed < 60.0,
        f"50 oracle traces, 1000 fuzz traces, {elapsed:.1f}s",
    )


def test_criterion_9_sweep_csv_is_deterministic(tmp_path):
    from ehsim.cli import main

    argv = [
        "sweep", "--dist", "exponential:10", "--L", "40",
        "--mean-sweep", "2,5", "--reps", "5", "--seed", "11",
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    same = a.read_bytes() == b.read_bytes()
    _verdict(9, "byte-identical sweeps", same, f"{a.stat().st_size} bytes")
