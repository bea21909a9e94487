import datetime as dt
import io
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from popdyn.bdays import (
    business_day_range,
    business_days,
    is_business_day,
    next_business_day,
    prev_business_day,
    window_ending,
)
from popdyn.ingest import (
    MirrorEvent,
    ParseError,
    TradeRecord,
    parse_mirrors,
    parse_trades,
    performance_series,
    reconstruct_popularity,
    rolling_performance,
    write_mirrors,
    write_trades,
)

MON = dt.date(2011, 9, 12)
DAYS = business_days(MON, 5)  # Mon..Fri


def day(i):
    """1-based business day within DAYS."""
    return DAYS[i - 1]


class TestBusinessDays:
    def test_weekend(self):
        assert not is_business_day(dt.date(2011, 9, 10))
        assert is_business_day(dt.date(2011, 9, 9))

    def test_window_skips_weekend(self):
        assert window_ending(MON, 5) == [
            dt.date(2011, 9, 6),
            dt.date(2011, 9, 7),
            dt.date(2011, 9, 8),
            dt.date(2011, 9, 9),
            MON,
        ]

    def test_next_after_friday(self):
        assert next_business_day(dt.date(2011, 9, 9)) == MON
        assert prev_business_day(MON) == dt.date(2011, 9, 9)

    @given(st.dates(dt.date(2000, 1, 1), dt.date(2030, 1, 1)), st.integers(1, 30))
    def test_window_shape(self, d, n):
        w = window_ending(d, n)
        assert len(w) == n
        assert all(is_business_day(x) and x <= d for x in w)
        assert w == sorted(set(w))

    def test_range(self):
        assert business_day_range(dt.date(2011, 9, 9), dt.date(2011, 9, 13)) == [
            dt.date(2011, 9, 9),
            MON,
            dt.date(2011, 9, 13),
        ]
        assert business_day_range(MON, MON - dt.timedelta(days=1)) == []


class TestParse:
    def test_trade_row(self):
        recs = parse_trades(io.StringIO("trader_id,close_date,daily_return\nt1,2011-09-12,2.5\n"))
        assert recs == [TradeRecord("t1", MON, 2.5)]

    def test_bytes_stream(self):
        recs = parse_trades(io.BytesIO(b"trader_id,close_date,daily_return\nt1,2011-09-12,2.5\n"))
        assert len(recs) == 1

    def test_header_only(self):
        assert parse_trades(io.StringIO("trader_id,close_date,daily_return\n")) == []

    def test_bad_date_line(self):
        with pytest.raises(ParseError) as info:
            parse_trades(io.StringIO("trader_id,close_date,daily_return\nt1,2011-13-40,1.0\n"))
        assert info.value.line == 2

    @pytest.mark.parametrize("ret", ["nan", "inf", "abc"])
    def test_bad_return(self, ret):
        with pytest.raises(ParseError):
            parse_trades(io.StringIO(f"trader_id,close_date,daily_return\nt1,2011-09-12,{ret}\n"))

    def test_bad_header(self):
        with pytest.raises(ParseError) as info:
            parse_trades(io.StringIO("a,b,c\n"))
        assert info.value.line == 1

    def test_wrong_arity(self):
        with pytest.raises(ParseError) as info:
            parse_trades(
                io.StringIO("trader_id,close_date,daily_return\nt1,2011-09-12,1\nt1,2011-09-12\n")
            )
        assert info.value.line == 3

    def test_open_mirror(self):
        ev = parse_mirrors(io.StringIO("copier_id,target_id,start_date,end_date\nc1,t1,2011-09-12,\n"))
        assert ev == [MirrorEvent("c1", "t1", MON, None)]

    def test_closed_mirror(self):
        ev = parse_mirrors(
            io.StringIO("copier_id,target_id,start_date,end_date\nc1,t1,2011-09-12,2011-09-14\n")
        )
        assert ev[0].end_date == dt.date(2011, 9, 14)

    def test_end_before_start(self):
        with pytest.raises(ParseError) as info:
            parse_mirrors(
                io.StringIO("copier_id,target_id,start_date,end_date\nc1,t1,2011-09-14,2011-09-12\n")
            )
        assert info.value.line == 2

    def test_write_roundtrip(self, tmp_path):
        trades = [TradeRecord("t1", MON, 0.1 + 0.2), TradeRecord("t2", day(2), -1e-300)]
        mirrors = [MirrorEvent("c1", "t1", MON, None), MirrorEvent("c2", "t2", MON, day(3))]
        write_trades(trades, tmp_path / "t.csv")
        write_mirrors(mirrors, tmp_path / "m.csv")
        assert parse_trades(tmp_path / "t.csv") == trades
        assert parse_mirrors(tmp_path / "m.csv") == mirrors

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            parse_trades(tmp_path / "nope.csv")


class TestPopularity:
    def test_open_event(self):
        pop = reconstruct_popularity([MirrorEvent("c", "t", day(3))], DAYS)
        assert pop["t"].tolist() == [0, 0, 1, 1, 1]

    def test_end_exclusive(self):
        pop = reconstruct_popularity([MirrorEvent("c", "t", day(2), day(4))], DAYS)
        assert pop["t"].tolist() == [0, 1, 1, 0, 0]

    def test_two_same_day(self):
        ev = [MirrorEvent("a", "t", day(2)), MirrorEvent("b", "t", day(2))]
        assert reconstruct_popularity(ev, DAYS)["t"].tolist() == [0, 2, 2, 2, 2]

    def test_opened_before_range(self):
        ev = [MirrorEvent("a", "t", dt.date(2011, 9, 1), day(2))]
        assert reconstruct_popularity(ev, DAYS)["t"].tolist() == [1, 0, 0, 0, 0]

    def test_weekend_start_counts_from_monday(self):
        ev = [MirrorEvent("a", "t", dt.date(2011, 9, 10))]
        assert reconstruct_popularity(ev, DAYS)["t"].tolist() == [1, 1, 1, 1, 1]

    def test_roster(self):
        ev = [MirrorEvent("a", "t", day(1), day(1))]  # zero-length: never counted
        assert reconstruct_popularity(ev, DAYS) == {}
        pop = reconstruct_popularity(ev, DAYS, roster=["t", "u"])
        assert sorted(pop) == ["t", "u"]
        assert pop["u"].tolist() == [0] * 5

    @given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 7)), max_size=40), st.randoms())
    def test_order_invariant_and_additive(self, spans, rnd):
        ext = business_days(dt.date(2011, 9, 5), 8)
        events = [
            MirrorEvent(f"c{i}", "t", ext[a], ext[a + b] if a + b < len(ext) else None)
            for i, (a, b) in enumerate(spans)
        ]
        base = reconstruct_popularity(events, DAYS, roster=["t"])["t"]
        shuffled = list(events)
        rnd.shuffle(shuffled)
        assert np.array_equal(reconstruct_popularity(shuffled, DAYS, roster=["t"])["t"], base)
        half = len(events) // 2
        parts = [reconstruct_popularity(p, DAYS, roster=["t"])["t"] for p in (events[:half], events[half:])]
        assert np.array_equal(parts[0] + parts[1], base)
        # brute force count per day
        for j, d in enumerate(DAYS):
            expected = sum(
                e.start_date <= d and (e.end_date is None or e.end_date > d) for e in events
            )
            assert base[j] == expected


class TestPerformance:
    def test_two_stage_average(self):
        trades = [
            TradeRecord("t", day(1), 1.0),
            TradeRecord("t", day(1), 3.0),
            TradeRecord("t", day(3), 4.0),
        ]
        assert rolling_performance(trades, day(5)) == 3.0

    def test_empty_window(self):
        trades = [TradeRecord("t", dt.date(2011, 8, 1), 1.0)]
        assert rolling_performance(trades, day(5)) is None

    def test_single_trade(self):
        assert rolling_performance([TradeRecord("t", day(2), -7.25)], day(4)) == -7.25

    def test_window_len_one(self):
        trades = [TradeRecord("t", day(4), 2.0), TradeRecord("t", day(5), 6.0), TradeRecord("t", day(5), 1.0)]
        assert rolling_performance(trades, day(5), window_len=1) == 3.5

    def test_window_crosses_weekend(self):
        trades = [TradeRecord("t", dt.date(2011, 9, 6), 10.0)]  # previous Tuesday
        assert rolling_performance(trades, MON) == 10.0
        assert rolling_performance(trades, day(2)) is None

    def test_order_invariant(self):
        rng = random.Random(3)
        trades = [
            TradeRecord("t", DAYS[rng.randrange(5)], rng.uniform(-50, 50)) for _ in range(60)
        ]
        ref = rolling_performance(trades, day(5))
        for _ in range(20):
            rng.shuffle(trades)
            assert rolling_performance(trades, day(5)) == ref

    def test_series_matches_pointwise(self):
        rng = random.Random(7)
        ext = business_days(dt.date(2011, 9, 1), 15)
        trades = [
            TradeRecord(f"t{rng.randrange(3)}", ext[rng.randrange(15)], rng.gauss(0, 5))
            for _ in range(40)
        ]
        series = performance_series(trades, ext, roster=["t9"])
        assert series["t9"] == [None] * 15
        for tid in ("t0", "t1", "t2"):
            mine = [t for t in trades if t.trader_id == tid]
            assert series[tid] == [rolling_performance(mine, d) for d in ext]
