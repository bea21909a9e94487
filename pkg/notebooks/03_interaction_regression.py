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
# # The interaction regression
#
# Fit `delta ~ popularity + performance + popularity x performance` on two
# subsets of user-days: popularity 0 or 1, and popularity above zero outside
# the daily top ranks.

# %%
from popdyn.config import DEFAULTS, market_config
from popdyn.pipeline import analyze_logs
from popdyn.simulator import emit_logs, simulate_market

cfg = dict(DEFAULTS, num_traders=600, cutoff=30)
truth = simulate_market(market_config(cfg))
trades, mirrors = emit_logs(truth)
out = analyze_logs(trades, mirrors, window_len=cfg["window"], cutoff=cfg["cutoff"])

print(len(out.points), "user-days")
for name, pts in out.subsets.items():
    print(name, len(pts))

# %%
for name, res in out.regressions.items():
    print(f"\n{name}  n={res.n_obs}  R2={res.r_squared:.4f}")
    for term in res.terms:
        print(f"  {term:12s} {res.coef(term):+.5g}  p={res.p(term):.3g}")

# %% [markdown]
# A positive interaction means performance moves popularity more for traders
# who are already popular.
