"""Arrival distributions: analytic means, sampling, determinism, parsing."""

from __future__ import annotations

import math

import numpy as np
import pytest

from ehsim import (
    Bernoulli,
    Constant,
    Empirical,
    Exponential,
    Uniform,
    distribution_from_mapping,
    parse_distribution,
    sample_trace,
)


def test_constant_trace():
    trace = sample_trace(Constant(5.0), 3, 123)
    assert trace.arrivals.tolist() == [5.0, 5.0, 5.0]


def test_bernoulli_edge_probabilities():
    assert sample_trace(Bernoulli(10.0, 0.0), 4, 5).arrivals.tolist() == [0.0] * 4
    assert sample_trace(Bernoulli(10.0, 1.0), 4, 5).arrivals.tolist() == [10.0] * 4


def test_exponential_long_run_mean():
    trace = sample_trace(Exponential(10.0), 100_000, 12345)
    assert abs(trace.mean() - 10.0) < 0.2


def test_same_seed_same_trace():
    a = sample_trace(Exponential(10.0), 50, 99)
    b = sample_trace(Exponential(10.0), 50, 99)
    c = sample_trace(Exponential(10.0), 50, 100)
    assert np.array_equal(a.arrivals, b.arrivals)
    assert not np.array_equal(a.arrivals, c.arrivals)


def test_longer_trace_extends_shorter_one():
    short = sample_trace(Exponential(10.0), 50, 7)
    long = sample_trace(Exponential(10.0), 5000, 7)
    assert np.array_equal(long.arrivals[:50], short.arrivals)


def test_analytic_means():
    assert Exponential(10.0).mean() == 10.0
    assert Bernoulli(10.0, 0.5).mean() == 5.0
    assert Constant(5.0).mean() == 5.0
    assert Uniform(0.0, 20.0).mean() == 10.0
    assert Empirical((1.0, 2.0, 3.0)).mean() == 2.0


def test_sample_means_track_analytic_means():
    # five standard errors of slack at 1e5 draws, per-kind spread
    n = 100_000
    cases = [
        (Exponential(4.0), 4.0),
        (Bernoulli(12.0, 0.3), 12.0 * math.sqrt(0.3 * 0.7)),
        (Constant(2.5), 0.0),
        (Uniform(1.0, 7.0), 6.0 / math.sqrt(12.0)),
        (Empirical((1.0, 2.0, 6.0)), float(np.std([1.0, 2.0, 6.0]))),
    ]
    for i, (spec, sigma) in enumerate(cases):
        trace = sample_trace(spec, n, 4242 + i)
        assert abs(trace.mean() - spec.mean()) <= 5.0 * sigma / math.sqrt(n) + 1e-12


def test_empirical_draws_only_listed_values():
    trace = sample_trace(Empirical((1.0, 2.5)), 1000, 8)
    assert set(trace.arrivals.tolist()) <= {1.0, 2.5}


def test_parameter_validation():
    with pytest.raises(ValueError):
        Exponential(-1.0)
    with pytest.raises(ValueError):
        Bernoulli(10.0, 1.5)
    with pytest.raises(ValueError):
        Uniform(3.0, 1.0)
    with pytest.raises(ValueError):
        Empirical(())
    with pytest.raises(ValueError):
        Empirical((1.0, -2.0))
    with pytest.raises(ValueError):
        sample_trace(Constant(1.0), 0, 0)


def test_with_mean_retargets_each_kind():
    assert Exponential(10.0).with_mean(4.0).mean() == 4.0
    b = Bernoulli(10.0, 0.5).with_mean(4.0)
    assert b.mean() == 4.0 and b.probability == 0.5
    assert Constant(5.0).with_mean(4.0).value == 4.0
    u = Uniform(2.0, 6.0).with_mean(8.0)
    assert u.mean() == 8.0 and u.low == 4.0
    e = Empirical((1.0, 3.0)).with_mean(4.0)
    assert e.mean() == 4.0
    with pytest.raises(ValueError):
        Bernoulli(10.0, 0.0).with_mean(4.0)


def test_parse_distribution_shorthand():
    assert parse_distribution("exponential:10") == Exponential(10.0)
    assert parse_distribution("bernoulli:10,0.5") == Bernoulli(10.0, 0.5)
    assert parse_distribution("constant:5") == Constant(5.0)
    assert parse_distribution("uniform:0,20") == Uniform(0.0, 20.0)
    assert parse_distribution("empirical:1,2,3") == Empirical((1.0, 2.0, 3.0))


@pytest.mark.parametrize(
    "text", ["exponential", "bernoulli:10", "constant:", "uniform:1", "gauss:3", "constant:x"]
)
def test_parse_distribution_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_distribution(text)


def test_distribution_from_mapping():
    assert distribution_from_mapping({"kind": "exponential", "mean": 10}) == Exponential(10.0)
    assert distribution_from_mapping(
        {"kind": "bernoulli", "peak": 10, "probability": 0.5}
    ) == Bernoulli(10.0, 0.5)
    assert distribution_from_mapping(
        {"kind": "empirical", "samples": [1, 2, 3]}
    ) == Empirical((1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        distribution_from_mapping({"kind": "exponential", "scale": 10})
    with pytest.raises(ValueError):
        distribution_from_mapping({"mean": 10})
