"""Regenerates the frozen binning golden files from an independent computation.

Rounding uses decimal ROUND_HALF_UP (halves away from zero) and moments use
the statistics module; nothing from popdyn is imported.
"""
import csv
import statistics
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

HERE = Path(__file__).parent


def fixture_points():
    pts = []
    for pop in range(10):
        for k in range(65):
            perf = -80 + 2.5 * k
            delta = (3 * pop + 7 * k + (k * k) % 11) % 6
            pts.append((f"u{pop}", k, pop, perf, delta))
    return pts


def perf_bin(x, step, limit):
    b = (Decimal(repr(x)) / Decimal(step)).quantize(Decimal(1), rounding=ROUND_HALF_UP) * step
    return max(-limit, min(limit, int(b)))


def cells(points, mode):
    groups = {}
    for _, _, pop, perf, delta in points:
        if mode == "left":
            key = (pop, perf_bin(perf, 25, 50))
        else:
            key = (min(pop, 5), perf_bin(perf, 10, 40))
        groups.setdefault(key, []).append(delta)
    rows = []
    for (pb, fb), ds in sorted(groups.items()):
        mean = statistics.fmean(ds)
        ci = 1.959964 * statistics.stdev(ds) / len(ds) ** 0.5 if len(ds) > 1 else 0.0
        rows.append(f"{mode},{pb},{fb:.12g},{mean:.12g},{len(ds)},{ci:.12g}")
    return rows


if __name__ == "__main__":
    pts = fixture_points()
    with open(HERE / "bins_fixture.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trader_id", "day_index", "popularity", "performance", "delta"])
        w.writerows(pts)
    header = "mode,pop_bin,perf_bin,mean_delta,count,ci_half_width"
    left = [p for p in pts if p[2] <= 1]
    right = [p for p in pts if p[2] >= 1]
    (HERE / "bins_left.golden.csv").write_text("\n".join([header] + cells(left, "left")) + "\n")
    (HERE / "bins_right.golden.csv").write_text("\n".join([header] + cells(right, "right")) + "\n")
