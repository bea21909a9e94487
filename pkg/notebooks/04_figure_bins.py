# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Binned changes in popularity
#
# Mean next-day change by performance bin, one curve per popularity level,
# with 95% intervals and the per-level fitted lines.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from popdyn.config import DEFAULTS, market_config
from popdyn.pipeline import analyze_logs
from popdyn.simulator import emit_logs, simulate_market

cfg = dict(DEFAULTS, num_traders=600, cutoff=30)
trades, mirrors = emit_logs(simulate_market(market_config(cfg)))
out = analyze_logs(trades, mirrors, window_len=cfg["window"], cutoff=cfg["cutoff"])

# %%
fig, axes = plt.subplots(1, 2, figsize=(11, 4))
for ax, mode in zip(axes, ("left", "right")):
    cells = [c for c in out.cells if c.mode == mode]
    for pop in sorted({c.pop_bin for c in cells}):
        row = sorted((c for c in cells if c.pop_bin == pop), key=lambda c: c.perf_bin)
        ax.errorbar(
            [c.perf_bin for c in row],
            [c.mean_delta for c in row],
            yerr=[c.ci_half_width for c in row],
            marker="o", capsize=3, label=f"pop {pop}{'+' if mode == 'right' and pop == 5 else ''}",
        )
    ax.set_xlabel("5-day performance bin")
    ax.set_ylabel("mean change in popularity")
    ax.legend()

for line in out.lines:
    xs = [-50, 50]
    axes[0].plot(xs, [line.intercept + line.slope * x for x in xs], "k--", lw=0.8)

fig.tight_layout()
fig.savefig("bins.png", dpi=120)

# %%
for line in out.lines:
    print(line)
