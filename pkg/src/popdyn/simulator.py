"""Monte Carlo simulation of trader popularity and synthetic transaction logs.

Each trader has a latent quality bit and an independent pool of
``population_size`` potential copiers. On every business day after day 0 the
trader closes one trade whose return is drawn from the signal model; the
rolling performance over the trailing window feeds ``f``; every copier
then re-decides, so the day's popularity is ``Binomial(N, posterior)``.

Per-trader random streams come from ``SeedSequence(master_seed,
spawn_key=(i,))`` (the same streams ``SeedSequence(master_seed).spawn`` hands
out), so trajectories do not depend on how many traders are simulated or
in what order.
"""
from __future__ import annotations

import csv
import datetime as dt
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import model
from .bdays import business_days
from .ingest import MirrorEvent, TradeRecord, mean_of_active_days
from .model import ModelParams

__all__ = [
    "Trajectory",
    "MarketConfig",
    "TraderTruth",
    "GroundTruth",
    "trader_rng",
    "trader_ids",
    "simulate_trajectory",
    "simulate_market",
    "emit_logs",
    "write_ground_truth",
    "read_ground_truth",
    "GROUND_TRUTH_HEADER",
]

GROUND_TRUTH_HEADER = ("trader_id", "quality_bit", "day", "popularity", "performance")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One trader's path over ``horizon + 1`` business days (day 0 is the initial state).

    ``raw_returns`` is NaN on days without a closed trade, which always
    includes day 0. ``posterior[0]`` is the smoothed initial share.
    """

    trader_id: str
    dates: tuple[dt.date, ...]
    raw_returns: np.ndarray
    performance: tuple[Optional[float], ...]
    posterior: np.ndarray
    popularity: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.trader_id == other.trader_id
            and self.dates == other.dates
            and self.performance == other.performance
            and np.array_equal(self.raw_returns, other.raw_returns, equal_nan=True)
            and np.array_equal(self.posterior, other.posterior)
            and np.array_equal(self.popularity, other.popularity)
        )


@dataclass(frozen=True)
class MarketConfig:
    num_traders: int = 100
    fraction_good: float = 0.5
    params: ModelParams = field(default_factory=ModelParams)
    date_start: dt.date = dt.date(2011, 9, 9)
    master_seed: int = 0
    window_len: int = 5
    # probability that a trader closes any trade on a given day
    activity_rate: float = 1.0

    def __post_init__(self):
        if isinstance(self.num_traders, bool) or not isinstance(self.num_traders, int):
            raise TypeError("num_traders must be an int")
        if self.num_traders < 1:
            raise ValueError("num_traders must be >= 1")
        if not 0.0 <= self.fraction_good <= 1.0:
            raise ValueError("fraction_good must lie in [0, 1]")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.window_len < 1:
            raise ValueError("window_len must be >= 1")
        if not 0.0 < self.activity_rate <= 1.0:
            raise ValueError("activity_rate must lie in (0, 1]")

    @property
    def num_good(self) -> int:
        # round half away from zero; Python's round() is banker's rounding
        return int(math.floor(self.fraction_good * self.num_traders + 0.5))


@dataclass(frozen=True)
class TraderTruth:
    good: bool
    trajectory: Trajectory

    @property
    def trader_id(self) -> str:
        return self.trajectory.trader_id


@dataclass(frozen=True)
class GroundTruth:
    config: MarketConfig
    traders: tuple[TraderTruth, ...]

    @property
    def dates(self) -> tuple[dt.date, ...]:
        return self.traders[0].trajectory.dates


def trader_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def trader_ids(num_traders: int) -> list[str]:
    width = max(4, len(str(num_traders - 1)))
    return [f"t{i:0{width}d}" for i in range(num_traders)]


def simulate_trajectory(
    params: ModelParams,
    good: bool,
    rng: Optional[np.random.Generator] = None,
    *,
    trader_id: str = "t0000",
    date_start: dt.date = dt.date(2011, 9, 9),
    window_len: int = 5,
    activity_rate: float = 1.0,
) -> Trajectory:
    """Simulate one trader.

    Draw order from ``rng``: all ``horizon`` returns, then (only when
    ``activity_rate < 1``) the ``horizon`` activity uniforms, then one
    binomial per step.
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    if window_len < 1:
        raise ValueError("window_len must be >= 1")
    T, N, alpha = params.horizon, params.population_size, params.alpha
    signal, spec = params.signal_model, params.f_spec

    dates = tuple(business_days(date_start, T + 1))
    raw = np.full(T + 1, np.nan)
    raw[1:] = rng.normal(signal.mean(good), signal.sigma, size=T)
    if activity_rate < 1.0:
        idle = rng.random(T) >= activity_rate
        raw[1:][idle] = np.nan
    day_values: list[Optional[float]] = [None if math.isnan(r) else float(r) for r in raw]

    popularity = np.empty(T + 1, dtype=np.int64)
    posterior = np.empty(T + 1)
    performance: list[Optional[float]] = [None] * (T + 1)
    popularity[0] = params.initial_popularity
    posterior[0] = min(model.smoothed_share(params.initial_popularity, N, alpha), 1.0)

    n_prev = int(popularity[0])
    for t in range(1, T + 1):
        perf = mean_of_active_days(day_values[max(0, t - window_len + 1): t + 1])
        prior = model.smoothed_share(n_prev, N, alpha)
        f = model.evaluate_f(perf, spec, prior, signal)
        p = model.posterior_step(n_prev, params, f)
        n_prev = int(rng.binomial(N, p))
        performance[t] = perf
        posterior[t] = p
        popularity[t] = n_prev

    return Trajectory(
        trader_id=trader_id,
        dates=dates,
        raw_returns=raw,
        performance=tuple(performance),
        posterior=posterior,
        popularity=popularity,
    )


def simulate_market(config: MarketConfig) -> GroundTruth:
    """Simulate every trader; trader ``i`` is good iff ``i < num_good``."""
    num_good = config.num_good
    traders = []
    for i, tid in enumerate(trader_ids(config.num_traders)):
        good = i < num_good
        traj = simulate_trajectory(
            config.params,
            good,
            trader_rng(config.master_seed, i),
            trader_id=tid,
            date_start=config.date_start,
            window_len=config.window_len,
            activity_rate=config.activity_rate,
        )
        traders.append(TraderTruth(good, traj))
    return GroundTruth(config, tuple(traders))


def emit_logs(truth: GroundTruth) -> tuple[list[TradeRecord], list[MirrorEvent]]:
    """Turn trajectories into trade and mirror logs that reconstruct them exactly.

    Increases open fresh mirrors; decreases close the most recently opened
    ones, ending on the day of the drop (end-exclusive counting).
    """
    trades: list[TradeRecord] = []
    mirrors: list[MirrorEvent] = []
    for trader in truth.traders:
        traj = trader.trajectory
        tid = traj.trader_id
        for day, r in zip(traj.dates, traj.raw_returns):
            if not math.isnan(r):
                trades.append(TradeRecord(tid, day, float(r)))

        opened: list[tuple[str, dt.date]] = []
        ends: dict[int, dt.date] = {}
        stack: list[int] = []
        prev = 0
        for day, n in zip(traj.dates, traj.popularity.tolist()):
            if n > prev:
                for _ in range(n - prev):
                    stack.append(len(opened))
                    opened.append((f"{tid}-c{len(opened)}", day))
            elif n < prev:
                for _ in range(prev - n):
                    ends[stack.pop()] = day
            prev = n
        for k, (copier, start) in enumerate(opened):
            mirrors.append(MirrorEvent(copier, tid, start, ends.get(k)))
    return trades, mirrors


def write_ground_truth(truth: GroundTruth, dest) -> None:
    owned = isinstance(dest, (str, os.PathLike))
    fh = open(dest, "w", newline="", encoding="utf-8") if owned else dest
    try:
        fh.write(",".join(GROUND_TRUTH_HEADER) + "\n")
        for trader in truth.traders:
            traj = trader.trajectory
            bit = int(trader.good)
            for day, n, perf in zip(traj.dates, traj.popularity.tolist(), traj.performance):
                perf_s = "" if perf is None else repr(perf)
                fh.write(f"{traj.trader_id},{bit},{day.isoformat()},{n},{perf_s}\n")
    finally:
        if owned:
            fh.close()


def read_ground_truth(path) -> dict[str, dict]:
    """Parse a ground-truth CSV into ``{trader_id: {good, dates, popularity, performance}}``."""
    out: dict[str, dict] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != GROUND_TRUTH_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        for tid, bit, day, n, perf in reader:
            rec = out.setdefault(
                tid, {"good": bit == "1", "dates": [], "popularity": [], "performance": []}
            )
            rec["dates"].append(dt.date.fromisoformat(day))
            rec["popularity"].append(int(n))
            rec["performance"].append(float(perf) if perf else None)
    return out
