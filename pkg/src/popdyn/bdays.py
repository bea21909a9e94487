"""Mon-Fri business-day calendar (no holidays)."""
from __future__ import annotations

import datetime as dt

import numpy as np

ONE_DAY = dt.timedelta(days=1)


def is_business_day(day: dt.date) -> bool:
    return day.weekday() < 5


def next_business_day(day: dt.date) -> dt.date:
    day += ONE_DAY
    while not is_business_day(day):
        day += ONE_DAY
    return day


def prev_business_day(day: dt.date) -> dt.date:
    day -= ONE_DAY
    while not is_business_day(day):
        day -= ONE_DAY
    return day


def roll_forward(day: dt.date) -> dt.date:
    """``day`` itself if it is a business day, else the next one."""
    return day if is_business_day(day) else next_business_day(day)


def window_ending(day: dt.date, length: int) -> list[dt.date]:
    """The ``length`` business days ending at ``day`` (inclusive when ``day`` is one)."""
    if length < 1:
        raise ValueError("length must be >= 1")
    last = day if is_business_day(day) else prev_business_day(day)
    out = [last]
    while len(out) < length:
        out.append(prev_business_day(out[-1]))
    out.reverse()
    return out


def business_days(start: dt.date, count: int) -> list[dt.date]:
    """``count`` consecutive business days starting at ``start`` (rolled forward)."""
    if count < 0:
        raise ValueError("count must be >= 0")
    out = []
    day = roll_forward(start)
    for _ in range(count):
        out.append(day)
        day = next_business_day(day)
    return out


def business_day_range(start: dt.date, end: dt.date) -> list[dt.date]:
    """All business days in the closed interval [start, end]."""
    if end < start:
        return []
    n = int(np.busday_count(start, end + ONE_DAY))
    return business_days(start, n)
