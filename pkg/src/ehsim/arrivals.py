"""Parametric i.i.d. arrival distributions and reproducible trace sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import EnergyTrace

DISTRIBUTION_KINDS = ("exponential", "bernoulli", "constant", "uniform", "empirical")


def _check_nonneg(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    return value


class DistributionSpec:
    """Common surface: analytic mean, a sampler, and re-targeting of the mean."""

    kind = "abstract"

    def mean(self) -> float:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def with_mean(self, target: float) -> "DistributionSpec":
        raise NotImplementedError


@dataclass(frozen=True)
class Exponential(DistributionSpec):
    """Exponential arrivals, parameterised by their mean."""

    mean_arrival: float
    kind = "exponential"

    def __post_init__(self):
        object.__setattr__(self, "mean_arrival", _check_nonneg("mean", self.mean_arrival))

    def mean(self) -> float:
        return self.mean_arrival

    def sample(self, rng, size):
        return rng.exponential(self.mean_arrival, size)

    def with_mean(self, target):
        return Exponential(float(target))


@dataclass(frozen=True)
class Bernoulli(DistributionSpec):
    """Either ``peak`` energy arrives (with the given probability) or none does."""

    peak: float
    probability: float
    kind = "bernoulli"

    def __post_init__(self):
        object.__setattr__(self, "peak", _check_nonneg("peak", self.peak))
        p = float(self.probability)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {p!r}")
        object.__setattr__(self, "probability", p)

    def mean(self) -> float:
        return self.peak * self.probability

    def sample(self, rng, size):
        return np.where(rng.random(size) < self.probability, self.peak, 0.0)

    def with_mean(self, target):
        target = float(target)
        if self.probability <= 0.0:
            if target == 0.0:
                return self
            raise ValueError("cannot retarget a zero-probability arrival to a positive mean")
        return Bernoulli(target / self.probability, self.probability)


@dataclass(frozen=True)
class Constant(DistributionSpec):
    """The same energy every block."""

    value: float
    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "value", _check_nonneg("value", self.value))

    def mean(self) -> float:
        return self.value

    def sample(self, rng, size):
        return np.full(size, self.value, dtype=float)

    def with_mean(self, target):
        return Constant(float(target))


@dataclass(frozen=True)
class Uniform(DistributionSpec):
    """Uniform arrivals on [low, high]."""

    low: float
    high: float
    kind = "uniform"

    def __post_init__(self):
        low = _check_nonneg("low", self.low)
        high = _check_nonneg("high", self.high)
        if high < low:
            raise ValueError(f"need low <= high, got {low!r} > {high!r}")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)

    def mean(self) -> float:
        return 0.5 * (self.low + self.high)

    def sample(self, rng, size):
        return rng.uniform(self.low, self.high, size)

    def with_mean(self, target):
        target = float(target)
        current = self.mean()
        if current == 0.0:
            if target == 0.0:
                return self
            raise ValueError("cannot rescale a zero-mean uniform to a positive mean")
        scale = target / current
        return Uniform(self.low * scale, self.high * scale)


@dataclass(frozen=True)
class Empirical(DistributionSpec):
    """Resampling with replacement from a fixed bag of observed arrivals."""

    samples: tuple
    kind = "empirical"

    def __post_init__(self):
        values = tuple(_check_nonneg("sample", v) for v in self.samples)
        if not values:
            raise ValueError("empirical distribution needs at least one sample")
        object.__setattr__(self, "samples", values)

    def mean(self) -> float:
        return math.fsum(self.samples) / len(self.samples)

    def sample(self, rng, size):
        return rng.choice(np.asarray(self.samples, dtype=float), size=size)

    def with_mean(self, target):
        target = float(target)
        current = self.mean()
        if current == 0.0:
            if target == 0.0:
                return self
            raise ValueError("cannot rescale zero-mean samples to a positive mean")
        scale = target / current
        return Empirical(tuple(v * scale for v in self.samples))


def parse_distribution(text: str) -> DistributionSpec:
    """Build a spec from CLI shorthand like ``exponential:10`` or ``uniform:0,20``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    values = []
    if rest.strip():
        try:
            values = [float(tok) for tok in rest.split(",")]
        except ValueError:
            raise ValueError(f"bad numeric parameter in distribution {text!r}") from None
    if kind == "exponential":
        if len(values) != 1:
            raise ValueError("exponential needs one parameter (mean), e.g. exponential:10")
        return Exponential(values[0])
    if kind == "bernoulli":
        if len(values) != 2:
            raise ValueError(
                "bernoulli needs two parameters (peak, probability), e.g. bernoulli:10,0.5"
            )
        return Bernoulli(values[0], values[1])
    if kind == "constant":
        if len(values) != 1:
            raise ValueError("constant needs one parameter (value), e.g. constant:5")
        return Constant(values[0])
    if kind == "uniform":
        if len(values) != 2:
            raise ValueError("uniform needs two parameters (low, high), e.g. uniform:0,20")
        return Uniform(values[0], values[1])
    if kind == "empirical":
        if not values:
            raise ValueError(
                "empirical needs at least one sample, e.g. empirical:1,2.5,4"
            )
        return Empirical(tuple(values))
    raise ValueError(
        f"unknown distribution kind {kind!r}; choose from {', '.join(DISTRIBUTION_KINDS)}"
    )


def distribution_from_mapping(data: dict) -> DistributionSpec:
    """Build a spec from a nested config-file mapping, e.g. {kind: exponential, mean: 10}."""
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("distribution mapping needs a 'kind' key")
    kind = str(data["kind"]).lower()
    fields = {k: v for k, v in data.items() if k != "kind"}

    def take(*names):
        missing = [n for n in names if n not in fields]
        extra = set(fields) - set(names)
        if missing or extra:
            raise ValueError(
                f"distribution kind {kind!r} takes keys {names}, got {sorted(fields)}"
            )
        return [fields[n] for n in names]

    if kind == "exponential":
        return Exponential(*take("mean"))
    if kind == "bernoulli":
        return Bernoulli(*take("peak", "probability"))
    if kind == "constant":
        return Constant(*take("value"))
    if kind == "uniform":
        return Uniform(*take("low", "high"))
    if kind == "empirical":
        (samples,) = take("samples")
        return Empirical(tuple(samples))
    raise ValueError(
        f"unknown distribution kind {kind!r}; choose from {', '.join(DISTRIBUTION_KINDS)}"
    )


def sample_trace(spec: DistributionSpec, length: int, seed: int) -> EnergyTrace:
    """Draw ``length`` i.i.d. arrivals deterministically from ``seed``.

    The same (spec, length, seed) triple always produces the identical
    trace, and a longer trace from the same seed extends a shorter one.
    """
    length = int(length)
    if length < 1:
        raise ValueError(f"trace length must be >= 1, got {length}")
    rng = np.random.default_rng(int(seed))
    return EnergyTrace(spec.sample(rng, length))
