"""Logs in, regression tables and plot data out."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Sequence

from . import analysis
from .analysis import (
    BinnedCell,
    GroupLine,
    PopPositiveNotTop100,
    PopZeroOne,
    UserDayPoint,
)
from .bdays import business_day_range
from .ingest import MirrorEvent, TradeRecord, performance_series, reconstruct_popularity
from .ols import RegressionResult

CONDITIONS = ("zero-one", "not-top100")
BIN_MODES = ("left", "right")
# each plot is drawn from one condition's subset
MODE_CONDITION = {"left": "zero-one", "right": "not-top100"}


@dataclass
class AnalysisOutput:
    days: list[dt.date]
    points: list[UserDayPoint]
    subsets: dict[str, list[UserDayPoint]]
    regressions: dict[str, RegressionResult] = field(default_factory=dict)
    cells: list[BinnedCell] = field(default_factory=list)
    lines: list[GroupLine] = field(default_factory=list)


def log_date_range(
    trades: Sequence[TradeRecord], mirrors: Sequence[MirrorEvent]
) -> list[dt.date]:
    dates = [t.close_date for t in trades]
    dates += [m.start_date for m in mirrors]
    dates += [m.end_date for m in mirrors if m.end_date is not None]
    if not dates:
        raise ValueError("logs contain no dated records")
    return business_day_range(min(dates), max(dates))


def analyze_logs(
    trades: Sequence[TradeRecord],
    mirrors: Sequence[MirrorEvent],
    *,
    window_len: int = 5,
    conditions: Sequence[str] = CONDITIONS,
    bin_modes: Sequence[str] = BIN_MODES,
    cutoff: int = 100,
) -> AnalysisOutput:
    """Reconstruct proxies from logs, subset, fit and summarise.

    Every trader named in either log is part of the roster used for daily
    popularity ranks.
    """
    for c in conditions:
        if c not in CONDITIONS:
            raise ValueError(f"unknown condition {c!r}")
    for m in bin_modes:
        if m not in BIN_MODES:
            raise ValueError(f"unknown bin mode {m!r}")

    days = log_date_range(trades, mirrors)
    roster = {t.trader_id for t in trades} | {m.target_id for m in mirrors}
    popularity = reconstruct_popularity(mirrors, days, roster=roster)
    performance = performance_series(trades, days, window_len, roster=roster)
    points = analysis.build_points(popularity, performance, days)

    ranks = analysis.daily_popularity_ranks(popularity, days)
    filters = {"zero-one": PopZeroOne(), "not-top100": PopPositiveNotTop100(cutoff)}
    needed = set(conditions) | {MODE_CONDITION[m] for m in bin_modes}
    subsets = {
        name: analysis.apply_filters(points, filters[name], ranks)
        for name in CONDITIONS
        if name in needed
    }

    out = AnalysisOutput(days=days, points=points, subsets=subsets)
    for name in conditions:
        out.regressions[name] = analysis.ols_interaction_fit(subsets[name])
    for mode in bin_modes:
        out.cells.extend(analysis.bin_summaries(subsets[MODE_CONDITION[mode]], mode))
    if "left" in bin_modes:
        out.lines = analysis.group_fit_lines(subsets["zero-one"])
    return out
