"""Transaction-log CSV I/O and reconstruction of popularity and performance.

Two CSV formats, UTF-8, ISO dates, no quoting:

    trades.csv   trader_id,close_date,daily_return
    mirrors.csv  copier_id,target_id,start_date,end_date   (empty end_date = open)

Popularity on a day is the end-of-day count of open mirrors: an event counts
on day ``d`` when ``start_date <= d < end_date``. Performance on a day is the
mean, over the business days in the trailing window that had closed trades,
of each such day's mean trade return.
"""
from __future__ import annotations

import csv
import datetime as dt
import io
import math
import os
from collections import defaultdict
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence, Union

import numpy as np

from .bdays import window_ending

__all__ = [
    "TRADE_HEADER",
    "MIRROR_HEADER",
    "ParseError",
    "TradeRecord",
    "MirrorEvent",
    "parse_trades",
    "parse_mirrors",
    "write_trades",
    "write_mirrors",
    "reconstruct_popularity",
    "mean_of_active_days",
    "daily_mean_returns",
    "rolling_performance",
    "performance_series",
]

TRADE_HEADER = ("trader_id", "close_date", "daily_return")
MIRROR_HEADER = ("copier_id", "target_id", "start_date", "end_date")

_OPEN = dt.date.max.toordinal() + 1

Source = Union[str, os.PathLike, IO[str], IO[bytes]]


class ParseError(ValueError):
    """Malformed CSV input; ``line`` is the 1-based physical line number."""

    def __init__(self, message: str, line: int, source: str = "<stream>"):
        self.line = line
        self.source = source
        super().__init__(f"{source}:{line}: {message}")


@dataclass(frozen=True, slots=True)
class TradeRecord:
    trader_id: str
    close_date: dt.date
    daily_return: float


@dataclass(frozen=True, slots=True)
class MirrorEvent:
    copier_id: str
    target_id: str
    start_date: dt.date
    end_date: Optional[dt.date] = None

    def __post_init__(self):
        if self.end_date is not None and self.end_date < self.start_date:
            raise ValueError(
                f"mirror {self.copier_id}->{self.target_id} ends before it starts"
            )


def _parse_date(text: str) -> dt.date:
    if len(text) != 10 or text[4] != "-" or text[7] != "-":
        raise ValueError(f"expected YYYY-MM-DD, got {text!r}")
    return dt.date.fromisoformat(text)


def _rows(source: Source, header: Sequence[str]):
    """Yield ``(line_number, fields, source_name)`` per data row after checking the header."""
    if isinstance(source, (str, os.PathLike)):
        name = os.fspath(source)
        with open(name, newline="", encoding="utf-8") as fh:
            yield from _rows_from(fh, header, name)
        return
    stream = source
    if isinstance(stream, (io.RawIOBase, io.BufferedIOBase)) or "b" in getattr(stream, "mode", ""):
        stream = io.TextIOWrapper(stream, encoding="utf-8", newline="")
    yield from _rows_from(stream, header, getattr(source, "name", "<stream>"))


def _rows_from(fh, header, name):
    reader = csv.reader(fh)
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError("missing header row", 1, name) from None
    if tuple(h.strip() for h in first) != tuple(header):
        raise ParseError(f"expected header {','.join(header)}, got {','.join(first)}", 1, name)
    for fields in reader:
        if not fields:
            continue
        if len(fields) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(fields)}", reader.line_num, name
            )
        yield reader.line_num, fields, name


def parse_trades(source: Source) -> list[TradeRecord]:
    out = []
    for line, (trader, date_s, ret_s), name in _rows(source, TRADE_HEADER):
        try:
            if not trader:
                raise ValueError("empty trader_id")
            ret = float(ret_s)
            if not math.isfinite(ret):
                raise ValueError(f"non-finite daily_return {ret_s!r}")
            out.append(TradeRecord(trader, _parse_date(date_s), ret))
        except ValueError as exc:
            raise ParseError(str(exc), line, name) from None
    return out


def parse_mirrors(source: Source) -> list[MirrorEvent]:
    out = []
    for line, (copier, target, start_s, end_s), name in _rows(source, MIRROR_HEADER):
        try:
            if not copier or not target:
                raise ValueError("empty copier_id or target_id")
            end = _parse_date(end_s) if end_s else None
            out.append(MirrorEvent(copier, target, _parse_date(start_s), end))
        except ValueError as exc:
            raise ParseError(str(exc), line, name) from None
    return out


def _open_for_write(dest):
    if isinstance(dest, (str, os.PathLike)):
        return open(dest, "w", newline="", encoding="utf-8"), True
    return dest, False


def write_trades(records: Iterable[TradeRecord], dest) -> None:
    """Write trades; returns use ``repr`` so they parse back bit-for-bit."""
    fh, owned = _open_for_write(dest)
    try:
        fh.write(",".join(TRADE_HEADER) + "\n")
        for r in records:
            fh.write(f"{r.trader_id},{r.close_date.isoformat()},{r.daily_return!r}\n")
    finally:
        if owned:
            fh.close()


def write_mirrors(events: Iterable[MirrorEvent], dest) -> None:
    fh, owned = _open_for_write(dest)
    try:
        fh.write(",".join(MIRROR_HEADER) + "\n")
        for e in events:
            end = e.end_date.isoformat() if e.end_date is not None else ""
            fh.write(f"{e.copier_id},{e.target_id},{e.start_date.isoformat()},{end}\n")
    finally:
        if owned:
            fh.close()


def reconstruct_popularity(
    events: Iterable[MirrorEvent],
    days: Sequence[dt.date],
    roster: Optional[Iterable[str]] = None,
) -> dict[str, np.ndarray]:
    """End-of-day copier counts per target over the business days ``days``.

    Targets with no event overlapping ``days`` are included (all zeros) only
    when listed in ``roster``. Keys are returned in sorted order.
    """
    days = list(days)
    if any(b <= a for a, b in zip(days, days[1:])):
        raise ValueError("days must be strictly increasing")
    ordinals = np.array([d.toordinal() for d in days], dtype=np.int64)
    n_days = len(days)

    events = list(events)
    names = sorted({e.target_id for e in events} | set(roster or ()))
    index = {name: i for i, name in enumerate(names)}
    target = np.fromiter((index[e.target_id] for e in events), np.int64, len(events))
    start = np.fromiter((e.start_date.toordinal() for e in events), np.int64, len(events))
    end = np.fromiter(
        (e.end_date.toordinal() if e.end_date is not None else _OPEN for e in events),
        np.int64,
        len(events),
    )
    # an event counts on day d when start <= d < end, i.e. index range [lo, hi)
    lo = np.searchsorted(ordinals, start, side="left")
    hi = np.searchsorted(ordinals, end, side="left")
    keep = lo < hi
    diffs = np.zeros((len(names), n_days + 1), dtype=np.int64)
    np.add.at(diffs, (target[keep], lo[keep]), 1)
    np.add.at(diffs, (target[keep], hi[keep]), -1)
    counts = np.cumsum(diffs[:, :n_days], axis=1)
    listed = set(roster or ())
    present = set(target[keep].tolist())
    return {
        name: counts[i]
        for i, name in enumerate(names)
        if i in present or name in listed
    }


def mean_of_active_days(day_means: Iterable[Optional[float]]) -> Optional[float]:
    """Mean of the non-missing per-day means, or ``None`` when all are missing.

    Uses ``math.fsum`` so the result does not depend on summation order.
    """
    vals = [v for v in day_means if v is not None]
    if not vals:
        return None
    return math.fsum(vals) / len(vals)


def daily_mean_returns(trades: Iterable[TradeRecord]) -> dict[str, dict[dt.date, float]]:
    """Per trader, per close date: the mean return of that day's trades."""
    grouped: dict[str, dict[dt.date, list[float]]] = defaultdict(lambda: defaultdict(list))
    for t in trades:
        grouped[t.trader_id][t.close_date].append(t.daily_return)
    return {
        trader: {day: math.fsum(v) / len(v) for day, v in by_day.items()}
        for trader, by_day in grouped.items()
    }


def rolling_performance(
    trades: Iterable[TradeRecord], day: dt.date, window_len: int = 5
) -> Optional[float]:
    """Performance of one trader's ``trades`` on ``day``.

    Every record is assumed to belong to the same trader.
    """
    if window_len < 1:
        raise ValueError("window_len must be >= 1")
    window = set(window_ending(day, window_len))
    by_day: dict[dt.date, list[float]] = defaultdict(list)
    for t in trades:
        if t.close_date in window:
            by_day[t.close_date].append(t.daily_return)
    return mean_of_active_days(math.fsum(v) / len(v) for v in by_day.values())


def performance_series(
    trades: Iterable[TradeRecord],
    days: Sequence[dt.date],
    window_len: int = 5,
    roster: Optional[Iterable[str]] = None,
) -> dict[str, list[Optional[float]]]:
    """Rolling performance for every trader on every day in ``days``."""
    if window_len < 1:
        raise ValueError("window_len must be >= 1")
    means = daily_mean_returns(trades)
    traders = set(means)
    if roster is not None:
        traders.update(roster)
    windows = [window_ending(d, window_len) for d in days]
    out = {}
    for trader in sorted(traders):
        by_day = means.get(trader, {})
        out[trader] = [
            mean_of_active_days(by_day.get(w) for w in window) for window in windows
        ]
    return out
