"""User-day observations, position-bias subsets, interaction regression and binned summaries."""
from __future__ import annotations

import datetime as dt
import math
import os
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from scipy.stats import rankdata

from . import ols
from .ols import RegressionResult, SingularDesignError

__all__ = [
    "UserDayPoint",
    "PopZeroOne",
    "PopPositiveNotTop100",
    "Condition",
    "BinnedCell",
    "GroupLine",
    "INTERACTION_TERMS",
    "CI_Z",
    "build_points",
    "daily_popularity_ranks",
    "apply_filters",
    "ols_interaction_fit",
    "round_to_multiple",
    "bin_point",
    "bin_summaries",
    "group_fit_lines",
    "write_regression_csv",
    "write_bins_csv",
    "write_lines_csv",
    "format_float",
]

INTERACTION_TERMS = ("intercept", "popularity", "performance", "interaction")
CI_Z = 1.959964

REGRESSION_HEADER = "condition,term,coef,se,t,p,n_obs,r2"
BINS_HEADER = "mode,pop_bin,perf_bin,mean_delta,count,ci_half_width"
LINES_HEADER = "pop_bin,slope,intercept"


@dataclass(frozen=True, slots=True, order=True)
class UserDayPoint:
    trader_id: str
    day: dt.date
    popularity: int
    performance: float
    delta: int


@dataclass(frozen=True)
class PopZeroOne:
    name = "zero-one"

    def admits(self, point: UserDayPoint, rank: Optional[int] = None) -> bool:
        return point.delta >= 0 and point.popularity in (0, 1)


@dataclass(frozen=True)
class PopPositiveNotTop100:
    cutoff: int = 100
    name = "not-top100"

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")

    def admits(self, point: UserDayPoint, rank: Optional[int] = None) -> bool:
        if rank is None:
            raise ValueError("rank required for the not-top100 condition")
        return point.delta >= 0 and point.popularity > 0 and rank > self.cutoff


Condition = Union[PopZeroOne, PopPositiveNotTop100]


def build_points(
    popularity: Mapping[str, Sequence[int]],
    performance: Mapping[str, Sequence[Optional[float]]],
    days: Sequence[dt.date],
) -> list[UserDayPoint]:
    """One point per (trader, day) with defined performance and a next day.

    ``popularity[trader][i]`` and ``performance[trader][i]`` refer to
    ``days[i]``; the last day never yields a point. Returned sorted by
    ``(trader_id, day)``.
    """
    points = []
    for trader in sorted(popularity):
        perf = performance.get(trader)
        if perf is None:
            continue
        pop = [int(v) for v in popularity[trader]]
        for i in range(len(days) - 1):
            q = perf[i]
            if q is None:
                continue
            points.append(UserDayPoint(trader, days[i], pop[i], float(q), pop[i + 1] - pop[i]))
    return points


def daily_popularity_ranks(
    popularity: Mapping[str, Sequence[int]], days: Sequence[dt.date]
) -> dict[tuple[str, dt.date], int]:
    """Rank of every trader on every day, 1 = most popular.

    Ties share the best rank in their group, so every trader tied with the
    cutoff-th value ranks inside the cutoff.
    """
    traders = sorted(popularity)
    if not traders:
        return {}
    counts = np.array([np.asarray(popularity[t]) for t in traders])
    ranks = rankdata(-counts, method="min", axis=0).astype(int)
    return {
        (trader, day): int(ranks[i, j])
        for i, trader in enumerate(traders)
        for j, day in enumerate(days)
    }


def apply_filters(
    points: Iterable[UserDayPoint],
    condition: Condition,
    ranks: Optional[Mapping[tuple[str, dt.date], int]] = None,
) -> list[UserDayPoint]:
    """Keep points without follower loss that satisfy ``condition``."""
    if isinstance(condition, PopZeroOne):
        return [p for p in points if condition.admits(p)]
    if ranks is None:
        raise ValueError("daily ranks are required for the not-top100 condition")
    return [p for p in points if condition.admits(p, ranks[(p.trader_id, p.day)])]


def _sorted(points: Iterable[UserDayPoint]) -> list[UserDayPoint]:
    return sorted(points, key=lambda p: (p.trader_id, p.day))


def ols_interaction_fit(points: Iterable[UserDayPoint]) -> RegressionResult:
    """Regress delta on popularity, performance and their product."""
    pts = _sorted(points)
    if len(pts) < 5:
        raise ValueError(f"need at least 5 observations, got {len(pts)}")
    pop = np.array([p.popularity for p in pts], dtype=float)
    perf = np.array([p.performance for p in pts], dtype=float)
    y = np.array([p.delta for p in pts], dtype=float)
    X = np.column_stack([np.ones_like(pop), pop, perf, pop * perf])
    return ols.fit(X, y, INTERACTION_TERMS)


def round_to_multiple(x: float, step: float) -> float:
    """Nearest multiple of ``step``, halves rounded away from zero."""
    return math.copysign(math.floor(abs(x) / step + 0.5), x) * step + 0.0


# mode -> (performance step, performance limit, popularity cap)
_BIN_MODES = {"left": (25.0, 50.0, None), "right": (10.0, 40.0, 5)}


def bin_point(popularity: int, performance: float, mode: str) -> tuple[int, float]:
    try:
        step, limit, cap = _BIN_MODES[mode]
    except KeyError:
        raise ValueError(f"unknown bin mode {mode!r}; expected 'left' or 'right'") from None
    if cap is None:
        if popularity not in (0, 1):
            raise ValueError(f"left-plot binning needs popularity 0 or 1, got {popularity}")
        pop_bin = popularity
    else:
        pop_bin = min(popularity, cap)
    perf_bin = min(max(round_to_multiple(performance, step), -limit), limit)
    return pop_bin, perf_bin


@dataclass(frozen=True)
class BinnedCell:
    mode: str
    pop_bin: int
    perf_bin: float
    mean_delta: float
    count: int
    ci_half_width: float


def _mean_ci(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    return mean, CI_Z * sd / math.sqrt(n)


def bin_summaries(points: Iterable[UserDayPoint], mode: str) -> list[BinnedCell]:
    """Mean delta with a 95% Gaussian interval per (popularity bin, performance bin)."""
    pts = _sorted(points)
    if not pts:
        raise ValueError("bin_summaries needs at least one point")
    cells: dict[tuple[int, float], list[float]] = defaultdict(list)
    for p in pts:
        cells[bin_point(p.popularity, p.performance, mode)].append(float(p.delta))
    out = []
    for (pop_bin, perf_bin), deltas in sorted(cells.items()):
        mean, ci = _mean_ci(deltas)
        out.append(BinnedCell(mode, pop_bin, perf_bin, mean, len(deltas), ci))
    return out


@dataclass(frozen=True)
class GroupLine:
    pop_bin: int
    slope: float
    intercept: float


def group_fit_lines(points: Iterable[UserDayPoint]) -> list[GroupLine]:
    """Per-popularity OLS line of delta on raw performance."""
    groups: dict[int, list[UserDayPoint]] = defaultdict(list)
    for p in _sorted(points):
        groups[p.popularity].append(p)
    lines = []
    for pop_bin, pts in sorted(groups.items()):
        perf = np.array([p.performance for p in pts])
        y = np.array([p.delta for p in pts], dtype=float)
        if len(np.unique(perf)) < 2:
            raise SingularDesignError("performance")
        X = np.column_stack([np.ones_like(perf), perf])
        if len(pts) == 2:
            intercept, slope = np.linalg.solve(X, y)
        else:
            res = ols.fit(X, y, ("intercept", "performance"))
            intercept, slope = res.coefficients
        lines.append(GroupLine(pop_bin, float(slope), float(intercept)))
    return lines


def format_float(x: float) -> str:
    return f"{x:.12g}"


def _write(dest, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        dest.write(text)


def write_regression_csv(results: Mapping[str, RegressionResult], dest) -> None:
    rows = [REGRESSION_HEADER]
    for name, res in results.items():
        for i, term in enumerate(res.terms):
            rows.append(
                ",".join(
                    [
                        name,
                        term,
                        format_float(res.coefficients[i]),
                        format_float(res.standard_errors[i]),
                        format_float(res.t_stats[i]),
                        format_float(res.p_values[i]),
                        str(res.n_obs),
                        format_float(res.r_squared),
                    ]
                )
            )
    _write(dest, rows)


def write_bins_csv(cells: Iterable[BinnedCell], dest) -> None:
    rows = [BINS_HEADER]
    for c in cells:
        rows.append(
            f"{c.mode},{c.pop_bin},{format_float(c.perf_bin)},{format_float(c.mean_delta)},"
            f"{c.count},{format_float(c.ci_half_width)}"
        )
    _write(dest, rows)


def write_lines_csv(lines: Iterable[GroupLine], dest) -> None:
    rows = [LINES_HEADER]
    for ln in lines:
        rows.append(f"{ln.pop_bin},{format_float(ln.slope)},{format_float(ln.intercept)}")
    _write(dest, rows)
