"""Least squares via Householder QR, with classical OLS inference."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .stats import student_t_sf_array


class SingularDesignError(ArithmeticError):
    """The design matrix is rank deficient; ``column`` names the first dependent column."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(
            f"design matrix is rank deficient: column {column!r} is collinear "
            "with the columns before it"
        )


@dataclass(frozen=True)
class RegressionResult:
    terms: tuple[str, ...]
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    n_obs: int
    degrees_of_freedom: int
    r_squared: float
    residuals: np.ndarray

    def coef(self, term: str) -> float:
        return float(self.coefficients[self.terms.index(term)])

    def p(self, term: str) -> float:
        return float(self.p_values[self.terms.index(term)])


def fit(X: np.ndarray, y: np.ndarray, terms: Sequence[str]) -> RegressionResult:
    """Ordinary least squares of ``y`` on the columns of ``X``.

    Standard errors use the unbiased residual variance; p-values are two-sided
    Student-t with ``n - k`` degrees of freedom.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if len(terms) != k:
        raise ValueError("one term name per design column required")
    if n <= k:
        raise ValueError(f"need more observations than parameters ({n} <= {k})")

    Q, R = np.linalg.qr(X, mode="reduced")
    col_norms = np.linalg.norm(X, axis=0)
    tol = max(n, k) * np.finfo(float).eps
    for j in range(k):
        if abs(R[j, j]) <= tol * col_norms[j]:
            raise SingularDesignError(terms[j])

    beta = solve_triangular(R, Q.T @ y)
    resid = y - X @ beta
    df = n - k
    rss = float(resid @ resid)
    s2 = rss / df
    R_inv = solve_triangular(R, np.eye(k))
    # diag((R^T R)^-1) = row sums of squares of R^-1
    se = np.sqrt(s2 * np.sum(R_inv**2, axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    p = student_t_sf_array(np.nan_to_num(t, nan=0.0), df)
    centered = y - y.mean()
    tss = float(centered @ centered)
    r2 = 1.0 - rss / tss if tss > 0 else float("nan")
    return RegressionResult(
        terms=tuple(terms),
        coefficients=beta,
        standard_errors=se,
        t_stats=t,
        p_values=p,
        n_obs=n,
        degrees_of_freedom=df,
        r_squared=r2,
        residuals=resid,
    )
