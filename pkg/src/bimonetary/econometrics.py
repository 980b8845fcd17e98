"""Multivariate time-series toolkit built from first principles.

Stationarity (augmented Dickey-Fuller), Johansen cointegration by trace,
Granger causality, VAR estimation with information-criterion lag selection,
Ljung-Box residual diagnostics, impulse responses, forecast-error variance
decomposition and deterministic forecasting. Inference uses the in-package
incomplete gamma/beta tails, so there is no statistics dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._dist import chi2_sf, f_sf, normal_cdf
from ._regression import qr_least_squares
from .errors import (
    InsufficientObservations,
    NonPositiveDefiniteSigma,
    RankDeficient,
    SeriesTooShort,
    ShapeMismatch,
    SingularMomentMatrix,
)
from .panel import Panel, Series

__all__ = [
    "AdfResult",
    "adf_test",
    "JohansenResult",
    "johansen_trace",
    "GrangerLag",
    "GrangerResult",
    "granger",
    "VarModel",
    "fit_var",
    "fit_var_order",
    "ljung_box",
    "LjungBoxResult",
    "IrfResult",
    "irf",
    "FevdResult",
    "fevd",
    "forecast",
    "stationarity_pipeline",
    "StationarityReport",
    "var_summary_json",
    "var_summary_text",
]


def _as_array(series) -> np.ndarray:
    if isinstance(series, Series):
        arr = series.to_array()
    else:
        arr = np.asarray(series, dtype=float)
    if arr.ndim != 1:
        raise ShapeMismatch("expected a one-dimensional series")
    if np.isnan(arr).any():
        raise ValueError("series contains missing values; clean the panel first")
    return arr


def _as_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2:
        raise ShapeMismatch("expected a (T, K) matrix")
    if np.isnan(arr).any():
        raise ValueError("matrix contains missing values; clean the panel first")
    return arr


# -- augmented Dickey-Fuller ---------------------------------------------------

# Response-surface constants for the constant-only regression, one I(1)
# series. Critical values: MacKinnon (2010), "Critical Values for
# Cointegration Tests", Queen's Economics Dept WP 1227, tau_c table
# (cv = b0 + b1/T + b2/T^2 + b3/T^3). Approximate p-value: MacKinnon (1994),
# JBES 12(2), Phi(polynomial in tau) with the small/large-tau split.
_ADF_CRIT_C = {
    "1%": (-3.43035, -6.5393, -16.786, -79.433),
    "5%": (-2.86154, -2.8903, -4.234, -40.040),
    "10%": (-2.56677, -1.5384, -2.809, 0.0),
}
_ADF_TAU_MAX = 2.74
_ADF_TAU_MIN = -18.83
_ADF_TAU_STAR = -1.61
_ADF_P_SMALL = (2.1659, 1.4412, 0.038269)
_ADF_P_LARGE = (1.7339, 0.93202, -0.12745, -0.010368)


def adf_critical_values(nobs: int) -> dict[str, float]:
    out = {}
    for level, (b0, b1, b2, b3) in _ADF_CRIT_C.items():
        out[level] = b0 + b1 / nobs + b2 / nobs**2 + b3 / nobs**3
    return out


def adf_pvalue(t_stat: float) -> float:
    if t_stat > _ADF_TAU_MAX:
        return 1.0
    if t_stat < _ADF_TAU_MIN:
        return 0.0
    coefs = _ADF_P_SMALL if t_stat <= _ADF_TAU_STAR else _ADF_P_LARGE
    poly = 0.0
    for c in reversed(coefs):
        poly = poly * t_stat + c
    return normal_cdf(poly)


@dataclass(frozen=True)
class AdfResult:
    t_stat: float
    lags_used: int
    decision_5pct: str          # "stationary" | "nonstationary"
    approx_pvalue: float
    critical_values: dict[str, float]

    @property
    def is_stationary(self) -> bool:
        return self.decision_5pct == "stationary"


def _adf_design(y: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows t = k+1..T-1 of: dy_t on [const, y_{t-1}, dy_{t-1}..dy_{t-k}]."""
    dy = np.diff(y)
    t0 = k + 1
    rows = len(y) - t0
    X = np.ones((rows, 2 + k))
    X[:, 1] = y[t0 - 1 : len(y) - 1]
    for j in range(1, k + 1):
        X[:, 1 + j] = dy[t0 - 1 - j : t0 - 1 - j + rows]
    return X, dy[t0 - 1 :]


def adf_test(series, max_lags: int | None = None) -> AdfResult:
    """Unit-root test with constant, no trend.

    Fits ``dy_t = alpha + beta*y_{t-1} + sum phi_i dy_{t-i} + e`` with the
    lag count chosen by AIC on a common sample (default cap
    ``floor(12*(T/100)**0.25)``), then refits at the chosen lag on all
    usable rows. The null of a unit root is rejected at 5% when the
    t-statistic on beta falls below the finite-sample critical value.
    """
    y = _as_array(series)
    T = len(y)
    if T < 15:
        raise SeriesTooShort(f"ADF needs at least 15 observations, got {T}")
    if y.max() == y.min():
        raise RankDeficient("constant series has no unit-root regression")
    cap = (T - 1) // 2 - 2
    if max_lags is None:
        max_lags = min(int(math.floor(12.0 * (T / 100.0) ** 0.25)), cap)
    max_lags = max(0, min(max_lags, cap))

    # lag search on the common sample so AICs are comparable
    X_full, dy_full = _adf_design(y, max_lags)
    n_common = len(dy_full)
    best_k, best_aic = 0, math.inf
    for k in range(max_lags + 1):
        X_k = X_full[:, : 2 + k]
        fit = qr_least_squares(X_k, dy_full)
        ssr = float(fit.ssr)
        if ssr <= 0.0:
            aic = -math.inf
        else:
            aic = n_common * math.log(ssr / n_common) + 2.0 * (2 + k)
        if aic < best_aic:
            best_aic, best_k = aic, k

    X, dy = _adf_design(y, best_k)
    fit = qr_least_squares(X, dy)
    se = fit.stderr(X)
    t_stat = float(fit.beta[1] / se[1])

    crit = adf_critical_values(len(dy))
    decision = "stationary" if t_stat < crit["5%"] else "nonstationary"
    return AdfResult(t_stat, best_k, decision, adf_pvalue(t_stat), crit)


# -- Johansen trace test --------------------------------------------------------

# 5% (with 90%/99% companions) critical values of the trace statistic for the
# model with an unrestricted constant (the det_order=0 case), dimension
# K - r = 1..12. Source: MacKinnon, Haug & Michelis (1996), "Numerical
# distribution functions of likelihood ratio tests for cointegration"
# (values as distributed with LeSage's johansen routine).
_JOHANSEN_TRACE_CRIT = (
    (2.7055, 3.8415, 6.6349),
    (13.4294, 15.4943, 19.9349),
    (27.0669, 29.7961, 35.4628),
    (44.4929, 47.8545, 54.6815),
    (65.8202, 69.8189, 77.8202),
    (91.1090, 95.7542, 104.9637),
    (120.3673, 125.6185, 135.9825),
    (153.6341, 159.5290, 171.0905),
    (190.8714, 197.3772, 210.0366),
    (232.1030, 239.2468, 253.2526),
    (277.3740, 285.1402, 300.2821),
    (326.5354, 334.9795, 351.2150),
)


@dataclass(frozen=True)
class JohansenResult:
    eigenvalues: np.ndarray      # descending
    trace_stats: np.ndarray      # -T * sum_{i>r} ln(1 - lambda_i), r = 0..K-1
    critical_values_5pct: np.ndarray
    reject_5pct: np.ndarray      # reject H0(rank <= r) per r
    rank: int                    # first non-rejected r (K if all rejected)
    T_effective: int


def johansen_trace(data, k_ar_diff: int = 1) -> JohansenResult:
    """Trace cointegration test with an unrestricted constant.

    Both the first differences and the lagged levels are residualized on
    ``k_ar_diff`` lagged differences plus a constant; the eigenvalues of the
    canonical-correlation problem between the two residual sets give the
    trace statistics, compared against the embedded 5% table.
    """
    data = _as_matrix(data)
    T, K = data.shape
    if K < 2:
        raise ValueError("cointegration needs at least two series")
    if K > len(_JOHANSEN_TRACE_CRIT):
        raise ValueError(
            f"critical values are tabulated up to K={len(_JOHANSEN_TRACE_CRIT)}"
        )
    if T < 10 * K:
        raise InsufficientObservations(
            f"need at least {10 * K} rows for K={K}, got {T}"
        )
    if k_ar_diff < 0:
        raise ValueError("k_ar_diff must be non-negative")

    dy = np.diff(data, axis=0)            # rows t = 1..T-1
    t0 = k_ar_diff + 1                     # first usable t
    rows = (T - 1) - k_ar_diff
    z = np.ones((rows, 1 + K * k_ar_diff))
    for j in range(1, k_ar_diff + 1):
        z[:, 1 + (j - 1) * K : 1 + j * K] = dy[t0 - 1 - j : t0 - 1 - j + rows]
    d0 = dy[t0 - 1 :]                      # dy_t
    lvl = data[t0 - 1 : T - 1]             # y_{t-1}

    def residualize(mat: np.ndarray) -> np.ndarray:
        coef, *_ = np.linalg.lstsq(z, mat, rcond=None)
        return mat - z @ coef

    r0 = residualize(d0)
    rk = residualize(lvl)
    s00 = r0.T @ r0 / rows
    skk = rk.T @ rk / rows
    sk0 = rk.T @ r0 / rows
    try:
        l_kk = np.linalg.cholesky(skk)
        s00_inv = np.linalg.inv(s00)
    except np.linalg.LinAlgError as exc:
        raise SingularMomentMatrix(str(exc)) from None
    inner = np.linalg.solve(l_kk, sk0 @ s00_inv @ sk0.T)
    inner = np.linalg.solve(l_kk, inner.T).T
    eigenvalues = np.linalg.eigvalsh((inner + inner.T) / 2.0)[::-1]
    eigenvalues = np.clip(eigenvalues, 0.0, 1.0 - 1e-15)

    log_terms = np.log1p(-eigenvalues)
    trace = -rows * np.cumsum(log_terms[::-1])[::-1]
    crit5 = np.array(
        [_JOHANSEN_TRACE_CRIT[K - r - 1][1] for r in range(K)]
    )
    reject = trace > crit5
    rank = K
    for r in range(K):
        if not reject[r]:
            rank = r
            break
    return JohansenResult(eigenvalues, trace, crit5, reject, rank, rows)


# -- Granger causality ----------------------------------------------------------


@dataclass(frozen=True)
class GrangerLag:
    lag: int
    f_stat: float
    p_value: float
    df_num: int
    df_den: int


@dataclass(frozen=True)
class GrangerResult:
    per_lag: tuple[GrangerLag, ...]

    def at(self, lag: int) -> GrangerLag:
        return self.per_lag[lag - 1]

    def min_p_value(self) -> float:
        return min(entry.p_value for entry in self.per_lag)


def _lagged(x: np.ndarray, lags: int, rows: int, t0: int) -> np.ndarray:
    return np.column_stack([x[t0 - j : t0 - j + rows] for j in range(1, lags + 1)])


def granger(x_cause, y_effect, max_lag: int) -> GrangerResult:
    """SSR-based F test of "x Granger-causes y" for each lag 1..max_lag.

    The restricted model regresses y on its own lags (plus constant), the
    unrestricted one adds the lags of x;
    ``F = ((SSR_r - SSR_u)/L) / (SSR_u/(T_eff - 2L - 1))``.
    """
    x = _as_array(x_cause)
    y = _as_array(y_effect)
    if len(x) != len(y):
        raise ShapeMismatch("series lengths differ")
    T = len(y)
    if max_lag < 1:
        raise ValueError("max_lag must be at least 1")
    if T <= 3 * max_lag + 3:
        raise InsufficientObservations(
            f"need more than {3 * max_lag + 3} observations, got {T}"
        )
    entries = []
    for lag in range(1, max_lag + 1):
        rows = T - lag
        own = _lagged(y, lag, rows, lag)
        other = _lagged(x, lag, rows, lag)
        const = np.ones((rows, 1))
        target = y[lag:]
        restricted = qr_least_squares(np.hstack([const, own]), target)
        unrestricted = qr_least_squares(np.hstack([const, own, other]), target)
        df_den = rows - 2 * lag - 1
        ssr_r, ssr_u = float(restricted.ssr), float(unrestricted.ssr)
        if ssr_u <= 0.0:
            raise RankDeficient("unrestricted regression fits exactly")
        f_stat = ((ssr_r - ssr_u) / lag) / (ssr_u / df_den)
        entries.append(GrangerLag(lag, f_stat, f_sf(f_stat, lag, df_den), lag, df_den))
    return GrangerResult(tuple(entries))


# -- VAR estimation --------------------------------------------------------------


@dataclass(frozen=True)
class VarModel:
    p: int
    variable_order: tuple[str, ...]
    c: np.ndarray                     # (K,)
    A: tuple[np.ndarray, ...]         # p matrices, each (K, K)
    sigma: np.ndarray                 # (K, K), df-corrected
    residuals: np.ndarray             # (T - p, K)
    T_effective: int
    stderr: np.ndarray                # (1 + K*p, K): const row, then lag blocks
    criterion: str = "aic"
    criterion_value: float = math.nan

    @property
    def k_vars(self) -> int:
        return len(self.variable_order)

    def coefficient_matrix(self) -> np.ndarray:
        """Stacked (1 + K*p, K) matrix: intercept row, then one K-row block
        per lag; column j holds equation j."""
        K = self.k_vars
        out = np.zeros((1 + K * self.p, K))
        out[0] = self.c
        for s, A_s in enumerate(self.A):
            out[1 + s * K : 1 + (s + 1) * K] = A_s.T
        return out

    def companion_matrix(self) -> np.ndarray:
        K, p = self.k_vars, self.p
        if p == 0:
            return np.zeros((K, K))
        top = np.hstack(self.A)
        if p == 1:
            return top
        eye = np.eye(K * (p - 1))
        bottom = np.hstack([eye, np.zeros((K * (p - 1), K))])
        return np.vstack([top, bottom])

    def is_stable(self) -> bool:
        radius = np.abs(np.linalg.eigvals(self.companion_matrix())).max()
        return bool(radius < 1.0)

    def unconditional_mean(self) -> np.ndarray:
        total = sum(self.A, start=np.zeros((self.k_vars, self.k_vars)))
        return np.linalg.solve(np.eye(self.k_vars) - total, self.c)


def _var_design(data: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    T, K = data.shape
    rows = T - p
    X = np.ones((rows, 1 + K * p))
    for lag in range(1, p + 1):
        X[:, 1 + (lag - 1) * K : 1 + lag * K] = data[p - lag : T - lag]
    return X, data[p:]


def _default_names(K: int) -> tuple[str, ...]:
    return tuple(f"y{j}" for j in range(K))


def fit_var_order(
    data, p: int, names: Sequence[str] | None = None
) -> VarModel:
    """Per-equation OLS estimate of a VAR(p) with intercept.

    ``p = 0`` is the intercept-only model. The residual covariance uses the
    degrees-of-freedom-corrected denominator ``T_eff - (K*p + 1)``.
    """
    data = _as_matrix(data)
    T, K = data.shape
    names = _default_names(K) if names is None else tuple(names)
    if len(names) != K:
        raise ShapeMismatch("variable name count differs from column count")
    if p < 0:
        raise ValueError("lag order must be non-negative")
    n_params = 1 + K * p
    if T - p <= n_params:
        raise InsufficientObservations(
            f"T={T} cannot identify a VAR({p}) in {K} variables"
        )
    X, Y = _var_design(data, p)
    fit = qr_least_squares(X, Y)
    B = np.atleast_2d(fit.beta)
    c = B[0].copy()
    A = tuple(
        B[1 + s * K : 1 + (s + 1) * K].T.copy() for s in range(p)
    )
    resid = fit.residuals
    dof = (T - p) - n_params
    sigma = resid.T @ resid / dof
    stderr = fit.stderr(X)
    return VarModel(p, names, c, A, sigma, resid, T - p, stderr)


def _criterion_value(
    sigma_ml: np.ndarray, p: int, K: int, T: int, criterion: str
) -> float:
    sign, logdet = np.linalg.slogdet(sigma_ml)
    if sign <= 0:
        return math.inf
    free = p * K * K
    if criterion == "aic":
        return logdet + 2.0 * free / T
    if criterion == "bic":
        return logdet + math.log(T) * free / T
    if criterion == "hqic":
        return logdet + 2.0 * math.log(math.log(T)) * free / T
    if criterion == "fpe":
        ratio = (T + K * p + 1) / (T - K * p - 1)
        return math.exp(logdet) * ratio**K
    raise ValueError(f"unknown criterion {criterion!r}")


def fit_var(
    data,
    max_lags: int,
    criterion: str = "aic",
    names: Sequence[str] | None = None,
) -> VarModel:
    """Select the lag order 0..max_lags by information criterion, then fit.

    Candidate orders are compared on a common sample (the first ``max_lags``
    rows are withheld from every candidate) using the maximum-likelihood
    residual covariance; the selected order is refit on all usable rows.
    """
    data = _as_matrix(data)
    T, K = data.shape
    criterion = criterion.lower()
    if max_lags < 0:
        raise ValueError("max_lags must be non-negative")
    if T - max_lags <= 1 + K * max_lags:
        raise InsufficientObservations(
            f"T={T} is too short to compare lag orders up to {max_lags}"
        )
    T_common = T - max_lags
    best_p, best_value = 0, math.inf
    for p in range(max_lags + 1):
        X, Y = _var_design(data[max_lags - p :], p)
        fit = qr_least_squares(X, Y)
        resid = fit.residuals
        sigma_ml = resid.T @ resid / T_common
        value = _criterion_value(sigma_ml, p, K, T_common, criterion)
        if value < best_value:
            best_value, best_p = value, p
    model = fit_var_order(data, best_p, names)
    return VarModel(
        model.p,
        model.variable_order,
        model.c,
        model.A,
        model.sigma,
        model.residuals,
        model.T_effective,
        model.stderr,
        criterion,
        best_value,
    )


# -- residual diagnostics --------------------------------------------------------


@dataclass(frozen=True)
class LjungBoxResult:
    q_stat: float
    p_value: float
    lags: int


def ljung_box(residual, lags: int) -> LjungBoxResult:
    """Portmanteau autocorrelation test:
    ``Q = T(T+2) * sum_k rho_k^2 / (T-k)`` against chi-square(lags)."""
    y = _as_array(residual)
    T = len(y)
    if lags < 1:
        raise ValueError("lags must be positive")
    if T <= lags + 1:
        raise SeriesTooShort(f"need more than {lags + 1} observations, got {T}")
    centered = y - y.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        raise RankDeficient("constant residual series")
    q = 0.0
    for k in range(1, lags + 1):
        rho = float(centered[k:] @ centered[:-k]) / denom
        q += rho * rho / (T - k)
    q *= T * (T + 2.0)
    return LjungBoxResult(q, chi2_sf(q, lags), lags)


# -- impulse responses and variance decomposition ---------------------------------


@dataclass(frozen=True)
class IrfResult:
    horizon: int
    psi: tuple[np.ndarray, ...]            # H+1 matrices, psi[0] = I
    theta: tuple[np.ndarray, ...] | None   # orthogonalized, theta[0] = chol
    cholesky_factor: np.ndarray | None


def _psi_matrices(model: VarModel, horizon: int) -> list[np.ndarray]:
    K = model.k_vars
    psi = [np.eye(K)]
    for h in range(1, horizon + 1):
        acc = np.zeros((K, K))
        for s in range(1, min(h, model.p) + 1):
            acc += model.A[s - 1] @ psi[h - s]
        psi.append(acc)
    return psi


def irf(model: VarModel, horizon: int, orthogonalize: bool = True) -> IrfResult:
    """Moving-average representation out to ``horizon``.

    ``psi[h]`` is the plain response; ``theta[h] = psi[h] @ P`` with
    ``P P' = sigma`` (lower Cholesky, so shock ordering follows
    ``variable_order``). Pass ``orthogonalize=False`` to skip the Cholesky
    step; otherwise a non-positive-definite covariance raises.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    psi = _psi_matrices(model, horizon)
    theta = None
    chol = None
    if orthogonalize:
        try:
            chol = np.linalg.cholesky(model.sigma)
        except np.linalg.LinAlgError:
            raise NonPositiveDefiniteSigma(
                "residual covariance is not positive definite; "
                "re-run with orthogonalize=False for plain responses"
            ) from None
        theta = tuple(m @ chol for m in psi)
    return IrfResult(horizon, tuple(psi), theta, chol)


@dataclass(frozen=True)
class FevdResult:
    variable_order: tuple[str, ...]
    shares: np.ndarray   # (K, H, K): response i, horizon row, shock j

    def for_variable(self, name: str) -> np.ndarray:
        return self.shares[self.variable_order.index(name)]


def fevd(model: VarModel, horizon: int) -> FevdResult:
    """Forecast-error variance shares from the orthogonalized responses.

    Row ``h`` (0-based, matching a forecast ``h+1`` steps out) of response
    i's table holds ``sum_{s<=h} theta_s[i,j]^2`` normalized across shocks
    j, so each row sums to one.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    result = irf(model, horizon - 1, orthogonalize=True)
    assert result.theta is not None
    K = model.k_vars
    contributions = np.stack([t**2 for t in result.theta])   # (H, K, K)
    cumulative = np.cumsum(contributions, axis=0)
    shares = np.empty((K, horizon, K))
    for i in range(K):
        table = cumulative[:, i, :]
        shares[i] = table / table.sum(axis=1, keepdims=True)
    return FevdResult(model.variable_order, shares)


def forecast(model: VarModel, last_observations, steps: int) -> np.ndarray:
    """Deterministic iteration of the fitted equations with zero shocks.

    ``last_observations`` must supply at least ``p`` rows in model variable
    order; only the final ``p`` are used.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    K = model.k_vars
    history = np.asarray(last_observations, dtype=float)
    if model.p > 0:
        if history.ndim != 2 or history.shape[1] != K:
            raise ShapeMismatch(f"expected (>= {model.p}, {K}) observations")
        if history.shape[0] < model.p:
            raise ShapeMismatch(
                f"need {model.p} trailing observations, got {history.shape[0]}"
            )
        window = list(history[-model.p :])
    else:
        window = []
    out = np.empty((steps, K))
    for step in range(steps):
        value = model.c.copy()
        for s in range(1, model.p + 1):
            value += model.A[s - 1] @ window[-s]
        out[step] = value
        if model.p > 0:
            window.append(value)
            window = window[-model.p :]
    return out


# -- column-wise stationarity pipeline --------------------------------------------


@dataclass(frozen=True)
class ColumnDecision:
    variable: str
    result: AdfResult
    differenced: bool


@dataclass(frozen=True)
class StationarityReport:
    decisions: tuple[ColumnDecision, ...]

    @property
    def differenced_variables(self) -> tuple[str, ...]:
        return tuple(d.variable for d in self.decisions if d.differenced)


def stationarity_pipeline(
    panel: Panel, max_lags: int | None = None
) -> tuple[Panel, StationarityReport]:
    """ADF-test every column and first-difference the nonstationary ones.

    Differencing shifts a column forward one row, so when any column is
    differenced the first row of the whole panel is dropped to keep the
    dates aligned.
    """
    decisions = []
    transformed: dict[str, Series] = {}
    any_differenced = False
    for name in panel.variables:
        series = panel.column(name)
        result = adf_test(series, max_lags)
        if result.is_stationary:
            decisions.append(ColumnDecision(name, result, False))
            transformed[name] = series
        else:
            decisions.append(ColumnDecision(name, result, True))
            values = series.to_array()
            diffed = np.concatenate([[np.nan], np.diff(values)])
            transformed[name] = Series.from_array(diffed)
            any_differenced = True
    out = Panel(panel.dates, transformed)
    if any_differenced:
        out = out.drop_leading_rows(1)
    return out, StationarityReport(tuple(decisions))


# -- summaries ---------------------------------------------------------------------


def _log_likelihood(model: VarModel) -> float:
    T, K = model.T_effective, model.k_vars
    sigma_ml = model.residuals.T @ model.residuals / T
    sign, logdet = np.linalg.slogdet(sigma_ml)
    if sign <= 0:
        return math.nan
    return -0.5 * T * (K * math.log(2.0 * math.pi) + logdet + K)


def var_summary_json(model: VarModel) -> dict:
    T, K = model.T_effective, model.k_vars
    sigma_ml = model.residuals.T @ model.residuals / T
    coef = model.coefficient_matrix()
    t_stats = coef / model.stderr
    labels = ["const"] + [
        f"L{s}.{name}"
        for s in range(1, model.p + 1)
        for name in model.variable_order
    ]
    equations = {}
    for j, name in enumerate(model.variable_order):
        equations[name] = {
            label: {
                "coefficient": float(coef[i, j]),
                "std_error": float(model.stderr[i, j]),
                "t_stat": float(t_stats[i, j]),
                "prob": float(2.0 * (1.0 - normal_cdf(abs(t_stats[i, j])))),
            }
            for i, label in enumerate(labels)
        }
    return {
        "model": "VAR",
        "method": "OLS",
        "lag_order": model.p,
        "n_equations": K,
        "nobs": T,
        "variables": list(model.variable_order),
        "log_likelihood": _log_likelihood(model),
        "criteria": {
            name: _criterion_value(sigma_ml, model.p, K, T, name)
            for name in ("aic", "bic", "hqic", "fpe")
        },
        "det_omega_mle": float(np.linalg.det(sigma_ml)),
        "sigma": model.sigma.tolist(),
        "equations": equations,
    }


def var_summary_text(model: VarModel) -> str:
    """Aligned plain-text table in the familiar regression-summary layout."""
    doc = var_summary_json(model)
    width = 34
    lines = [
        "Summary of Regression Results".center(width),
        "=" * width,
        f"Model:{'VAR':>{width - 6}}",
        f"Method:{'OLS':>{width - 7}}",
        "-" * width,
        f"No. of Equations:{doc['n_equations']:>{width - 17}}",
        f"Nobs:{doc['nobs']:>{width - 5}}",
        f"Log likelihood:{doc['log_likelihood']:>{width - 15}.3f}",
        f"AIC:{doc['criteria']['aic']:>{width - 4}.6g}",
        f"BIC:{doc['criteria']['bic']:>{width - 4}.6g}",
        f"HQIC:{doc['criteria']['hqic']:>{width - 5}.6g}",
        f"FPE:{doc['criteria']['fpe']:>{width - 4}.6g}",
        f"Det(Omega_mle):{doc['det_omega_mle']:>{width - 15}.6g}",
        "-" * width,
    ]
    label_width = max(
        (len(label) for eq in doc["equations"].values() for label in eq),
        default=12,
    )
    header = (
        f"{'':<{label_width}} {'coefficient':>14} {'std. error':>14} "
        f"{'t-stat':>10} {'prob':>8}"
    )
    for name, eq in doc["equations"].items():
        lines.append("")
        lines.append(f"Results for equation {name}")
        lines.append("=" * len(header))
        lines.append(header)
        for label, cell in eq.items():
            lines.append(
                f"{label:<{label_width}} {cell['coefficient']:>14.6f} "
                f"{cell['std_error']:>14.6f} {cell['t_stat']:>10.3f} "
                f"{cell['prob']:>8.3f}"
            )
    lines.append("")
    return "\n".join(lines)
