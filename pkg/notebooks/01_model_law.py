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
# # The expected-change law
#
# One copier decision per member of a population of size `N`. The chance of
# adopting a trader is the smoothed share `(n + alpha) / (N + alpha)` scaled by
# a quality multiplier `f`, clipped to `[0, 1]`.

# %%
from fractions import Fraction

import numpy as np

from popdyn.model import (
    LinearF,
    ModelParams,
    ExactBayes,
    SignalModel,
    evaluate_f,
    expected_delta_approx,
    expected_delta_exact,
    posterior_step,
)

params = ModelParams(population_size=10_000, alpha=1.0)

# %% [markdown]
# The approximate law `(f - 1) n + f alpha` differs from the exact mean
# `N p - n` by `f alpha (n + alpha) / (N + alpha)`, which is small compared
# with `n` once `N` is large.

# %%
for n in (0, 10, 100, 1000):
    for f in (0.5, 1.0, 1.5):
        exact = expected_delta_exact(n, params, f)
        approx = expected_delta_approx(n, params.alpha, f)
        print(f"n={n:5d} f={f:3.1f}  exact={exact:12.6f}  approx={approx:12.6f}  gap={exact - approx:.6g}")

# %% [markdown]
# In double precision the gap is a difference of two numbers near `n`, so it
# carries an absolute error of about one ulp of `n`. With exact rationals the
# identity holds with no error at all.

# %%
N, alpha, n, f = 10_000, Fraction(1, 10), 100, Fraction(1)
p = f * (n + alpha) / (N + alpha)
gap = (N * p - n) - ((f - 1) * n + f * alpha)
print(gap == f * alpha * (n + alpha) / (N + alpha))

# %% [markdown]
# ## Quality multipliers
#
# The linear multiplier maps a signal `q` to `clamp(c0 + c1 q)`. A missing
# signal leaves the share unchanged. The exact alternative is the Gaussian
# likelihood ratio normalised by the prior.

# %%
spec = LinearF(c0=0.8, c1=0.05, clamp_min=0.0, clamp_max=10.0)
signal = SignalModel(mu_good=3.0, mu_bad=-3.0, sigma=10.0)
for q in (None, -40.0, -4.0, 0.0, 4.0, 40.0):
    print(q, evaluate_f(q, spec, 0.5, signal), evaluate_f(q, ExactBayes(), 0.5, signal))

# %% [markdown]
# ## Rich get richer, conditionally
#
# The gain from a better signal grows with current popularity.

# %%
grid = np.array([[expected_delta_approx(n, 1.0, f) for f in (0.9, 1.1)] for n in (0, 5, 50, 500)])
print(grid)
print("gain from better signal:", grid[:, 1] - grid[:, 0])

# %%
print(posterior_step(50, ModelParams(population_size=200, alpha=1.0), 1.2))
