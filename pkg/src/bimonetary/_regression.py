"""Least-squares plumbing shared by the calibration and time-series modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientRows, RankDeficient

#: Relative pivot threshold below which a QR factor is declared rank deficient.
PIVOT_RTOL = 1e-10


@dataclass(frozen=True)
class LeastSquaresFit:
    beta: np.ndarray          # (k,) or (k, m) matching the response shape
    residuals: np.ndarray
    ssr: np.ndarray           # scalar array for 1-d response, (m,) otherwise
    df_resid: int

    def stderr(self, X: np.ndarray) -> np.ndarray:
        """Coefficient standard errors with the df-corrected variance."""
        xtx_inv = np.linalg.inv(X.T @ X)
        sigma2 = self.ssr / self.df_resid
        diag = np.sqrt(np.diag(xtx_inv))
        if self.beta.ndim == 1:
            return diag * np.sqrt(sigma2)
        return np.sqrt(np.outer(np.diag(xtx_inv), sigma2))


def qr_least_squares(X: np.ndarray, y: np.ndarray) -> LeastSquaresFit:
    """Solve min ||X b - y|| via QR, failing loudly on collinear regressors.

    Raises
    ------
    InsufficientRows
        Fewer rows than coefficients.
    RankDeficient
        Any |R_ii| below PIVOT_RTOL times the largest |R_jj|.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if n < k:
        raise InsufficientRows(f"{n} rows for {k} coefficients")
    # column equilibration makes the pivot test scale-invariant, so mixed
    # magnitudes (GDP levels next to an intercept) are not mistaken for
    # collinearity; the solution itself is unchanged by diagonal scaling
    norms = np.linalg.norm(X, axis=0)
    if (norms == 0.0).any():
        raise RankDeficient("zero column in the design matrix")
    scaled = X / norms
    q, r = np.linalg.qr(scaled)
    pivots = np.abs(np.diag(r))
    if pivots.size and pivots.min() < PIVOT_RTOL * pivots.max():
        raise RankDeficient(
            f"relative pivot {pivots.min() / pivots.max():.3e} below threshold"
        )
    beta = np.linalg.solve(r, q.T @ y)
    if beta.ndim == 1:
        beta = beta / norms
    else:
        beta = beta / norms[:, None]
    residuals = y - X @ beta
    ssr = np.einsum("i...,i...->...", residuals, residuals)
    return LeastSquaresFit(beta, residuals, ssr, n - k)


def r_squared(y: np.ndarray, residuals: np.ndarray) -> float:
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0
    return 1.0 - float(residuals @ residuals) / ss_tot
