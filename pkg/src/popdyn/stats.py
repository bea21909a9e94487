"""Student-t tail probabilities."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import betainc


def student_t_sf(t: float, df: float) -> float:
    """Two-sided tail ``2 * P(T >= |t|)`` for a Student-t with ``df`` degrees of freedom.

    Uses the identity ``2 * P(T >= |t|) = I_x(df/2, 1/2)`` with
    ``x = df / (df + t**2)``, where ``I`` is the regularized incomplete beta.
    """
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    if not df >= 1:
        raise ValueError(f"df must be >= 1, got {df!r}")
    if t == 0:
        return 1.0
    t2 = t * t
    x = df / (df + t2)
    p = float(betainc(0.5 * df, 0.5, x))
    return min(max(p, 0.0), 1.0)


def student_t_sf_array(t, df) -> np.ndarray:
    """Vectorised :func:`student_t_sf`; infinite ``|t|`` maps to 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    for i, v in np.ndenumerate(t):
        out[i] = 0.0 if np.isinf(v) else student_t_sf(float(v), df)
    return out
