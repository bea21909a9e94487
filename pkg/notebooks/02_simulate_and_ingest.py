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
# # Simulate a market and read it back
#
# A small market is simulated, written out as transaction and mirror logs, and
# reconstructed from those logs alone.

# %%
import io

import numpy as np

from popdyn.ingest import (
    parse_mirrors,
    parse_trades,
    performance_series,
    reconstruct_popularity,
    write_mirrors,
    write_trades,
)
from popdyn.model import LinearF, ModelParams
from popdyn.simulator import MarketConfig, emit_logs, simulate_market

params = ModelParams(
    population_size=40,
    alpha=1.0,
    f_spec=LinearF(0.8, 0.05, 0.0, 10.0),
    horizon=20,
    initial_popularity=2,
)
cfg = MarketConfig(num_traders=6, fraction_good=0.5, params=params, master_seed=42, activity_rate=0.8)
truth = simulate_market(cfg)

for t in truth.traders:
    print(t.trajectory.trader_id, "good" if t.good else "bad ", t.trajectory.popularity.tolist())

# %% [markdown]
# Every rise in popularity becomes a new mirror. Every fall closes the most
# recently opened one.

# %%
trades, mirrors = emit_logs(truth)
tbuf, mbuf = io.StringIO(), io.StringIO()
write_trades(trades, tbuf)
write_mirrors(mirrors, mbuf)
print(tbuf.getvalue().splitlines()[:4])
print(mbuf.getvalue().splitlines()[:4])

# %%
ids = [t.trajectory.trader_id for t in truth.traders]
pop = reconstruct_popularity(parse_mirrors(io.StringIO(mbuf.getvalue())), truth.dates, roster=ids)
perf = performance_series(parse_trades(io.StringIO(tbuf.getvalue())), truth.dates, 5, roster=ids)

print(all(np.array_equal(pop[t.trajectory.trader_id], t.trajectory.popularity) for t in truth.traders))
print(all(perf[t.trajectory.trader_id] == list(t.trajectory.performance) for t in truth.traders))

# %% [markdown]
# Idle days have no trade, so they drop out of the rolling window. A window
# with no active day at all has no performance value.

# %%
print(perf[ids[0]])
