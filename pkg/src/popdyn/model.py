"""Probability-matching popularity model.

Agents hold a belief that an action is good, approximated by the smoothed
share of agents who took it last step, and update that belief by a
likelihood ratio ``f`` of the newest quality signal. Each agent then takes
the action with probability equal to the updated belief.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

__all__ = [
    "LinearF",
    "ExactBayes",
    "FSpec",
    "SignalModel",
    "ModelParams",
    "PosteriorState",
    "linear_f",
    "exact_f",
    "evaluate_f",
    "smoothed_share",
    "posterior_step",
    "expected_delta_approx",
    "expected_delta_exact",
]


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class LinearF:
    """``f(q) = clamp(c0 + c1*q, clamp_min, clamp_max)``."""

    c0: float = 1.0
    c1: float = 0.01
    clamp_min: float = 0.0
    clamp_max: float = 10.0

    def __post_init__(self):
        for name in ("c0", "c1", "clamp_min", "clamp_max"):
            _require_finite(name, getattr(self, name))
        if self.clamp_min < 0:
            raise ValueError("clamp_min must be >= 0 (f is a likelihood ratio)")
        if not self.clamp_max > self.clamp_min:
            raise ValueError("clamp_max must exceed clamp_min")


@dataclass(frozen=True)
class ExactBayes:
    """Marker: compute f exactly from the Gaussian signal model."""


FSpec = Union[LinearF, ExactBayes]


@dataclass(frozen=True)
class SignalModel:
    """Two-hypothesis Gaussian signal (percent returns) with shared sigma."""

    mu_good: float = 0.5
    mu_bad: float = -0.5
    sigma: float = 5.0

    def __post_init__(self):
        for name in ("mu_good", "mu_bad", "sigma"):
            _require_finite(name, getattr(self, name))
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")

    def mean(self, good: bool) -> float:
        return self.mu_good if good else self.mu_bad


@dataclass(frozen=True)
class ModelParams:
    population_size: int = 200
    alpha: float = 1.0
    f_spec: FSpec = field(default_factory=LinearF)
    signal_model: SignalModel = field(default_factory=SignalModel)
    horizon: int = 100
    initial_popularity: int = 0
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.population_size, bool) or not isinstance(self.population_size, int):
            raise TypeError("population_size must be an int")
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        _require_finite("alpha", self.alpha)
        if not 0 < self.alpha < self.population_size:
            raise ValueError(
                f"alpha must satisfy 0 < alpha < population_size, got {self.alpha}"
            )
        if not isinstance(self.f_spec, (LinearF, ExactBayes)):
            raise TypeError("f_spec must be LinearF or ExactBayes")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if not 0 <= self.initial_popularity <= self.population_size:
            raise ValueError("initial_popularity must lie in [0, population_size]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class PosteriorState:
    popularity: int
    posterior: float

    def __post_init__(self):
        if self.popularity < 0:
            raise ValueError("popularity must be >= 0")
        if not 0.0 <= self.posterior <= 1.0:
            raise ValueError("posterior must lie in [0, 1]")


_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _gauss_pdf(x: float, mu: float, sigma: float) -> float:
    z = (x - mu) / sigma
    return math.exp(-0.5 * z * z) / (sigma * _SQRT_2PI)


def linear_f(q: float, spec: LinearF) -> float:
    _require_finite("q", q)
    return min(max(spec.c0 + spec.c1 * q, spec.clamp_min), spec.clamp_max)


def exact_f(q: float, prior: float, model: SignalModel) -> float:
    """Likelihood ratio P(q | good) / P(q) under the Gaussian signal model.

    ``prior`` is the current belief that the action is good. Returns 1 when
    both densities underflow, i.e. the signal carries no usable information.
    """
    _require_finite("q", q)
    if not 0.0 <= prior <= 1.0:
        raise ValueError(f"prior must lie in [0, 1], got {prior!r}")
    if prior == 1.0 or model.mu_good == model.mu_bad:
        return 1.0
    dens_good = _gauss_pdf(q, model.mu_good, model.sigma)
    dens_bad = _gauss_pdf(q, model.mu_bad, model.sigma)
    if dens_good == 0.0 and dens_bad == 0.0:
        return 1.0
    return dens_good / (prior * dens_good + (1.0 - prior) * dens_bad)


def smoothed_share(popularity: int, population_size: int, alpha: float) -> float:
    """(n + alpha) / (N + alpha), the popularity proxy for the previous posterior."""
    return (popularity + alpha) / (population_size + alpha)


def evaluate_f(q: float | None, spec: FSpec, prior: float, signal: SignalModel) -> float:
    """Dispatch on ``spec``; a missing signal (``q is None``) yields f = 1."""
    if q is None:
        return 1.0
    if isinstance(spec, LinearF):
        return linear_f(q, spec)
    return exact_f(q, min(prior, 1.0), signal)


def _check_f(f_value: float) -> None:
    if not math.isfinite(f_value) or f_value < 0:
        raise ValueError(f"f_value must be finite and >= 0, got {f_value!r}")


def posterior_step(prev_popularity: int, params: ModelParams, f_value: float) -> float:
    _check_f(f_value)
    if not 0 <= prev_popularity <= params.population_size:
        raise ValueError("prev_popularity must lie in [0, population_size]")
    p = f_value * smoothed_share(prev_popularity, params.population_size, params.alpha)
    return min(max(p, 0), 1)


def expected_delta_approx(popularity: int, alpha: float, f_value: float) -> float:
    """Approximate expected one-step change ``(f - 1)*n + f*alpha`` (unclamped)."""
    for name, v in (("popularity", popularity), ("alpha", alpha), ("f_value", f_value)):
        _require_finite(name, v)
    if popularity < 0 or alpha <= 0 or f_value < 0:
        raise ValueError("need popularity >= 0, alpha > 0, f_value >= 0")
    return (f_value - 1) * popularity + f_value * alpha


def expected_delta_exact(popularity: int, params: ModelParams, f_value: float) -> float:
    """E[n_next] - n under Binomial(N, p) adoption with the clamped posterior."""
    p = posterior_step(popularity, params, f_value)
    return params.population_size * p - popularity
