"""Closed-form model equations for the bimonetary economy.

Currency demands, relative demand, the covered-parity devaluation
expectation, inflation and income forecasts, the expectation recursion and
its star operation, the introductory toy demand curves, plus least-squares
calibration of the coefficients against a panel and panel-wide simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Callable

import numpy as np

from ._regression import qr_least_squares, r_squared
from .errors import DivisionByZero, InsufficientRows
from .panel import Panel, Series


@dataclass(frozen=True)
class StructuralCoefficients:
    """Sensitivities of the four linear model equations.

    Peso demand      L_ars = Y*alpha1 + i_ars*alpha2 - pi_ars_exp*alpha3
    Dollar demand    L_usd = Y*beta1 + i_usd*beta2 - pi_usd_exp*beta3
    Inflation        pi    = pi_exp*gamma1 + M*gamma2
    Income           Y     = M_ars*delta1 + lending_borrowing*delta2

    Intercepts default to zero; disable them at calibration time for a
    literal intercept-free fit.
    """

    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    beta3: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    ars_intercept: float = 0.0
    usd_intercept: float = 0.0
    inflation_intercept: float = 0.0
    income_intercept: float = 0.0

    def __post_init__(self) -> None:
        for spec in fields(self):
            value = getattr(self, spec.name)
            if not math.isfinite(value):
                raise ValueError(f"{spec.name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ExpectationDynamicsParams:
    """Weights of the expectation recursion plus the optional nonlinear
    correction eta(pi, E) used by the star operation (default: identically 0).
    """

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    eta: Callable[[float, float], float] | None = None

    def __post_init__(self) -> None:
        for value in (self.a, self.b, self.c):
            if not math.isfinite(value):
                raise ValueError("recursion weights must be finite")


@dataclass(frozen=True)
class ToyDemandParams:
    A: float = 1.0
    B: float = 5.0
    k: float = 2.0
    C: float = 1.0


TOY_DEFAULTS = ToyDemandParams()


def demand_ars(
    y: float, i_ars: float, pi_exp: float, c: StructuralCoefficients
) -> float:
    return y * c.alpha1 + i_ars * c.alpha2 - pi_exp * c.alpha3 + c.ars_intercept


def demand_usd(
    y: float, i_usd: float, pi_usa_exp: float, c: StructuralCoefficients
) -> float:
    return y * c.beta1 + i_usd * c.beta2 - pi_usa_exp * c.beta3 + c.usd_intercept


def relative_demand(
    l_ars: float,
    l_usd: float,
    i_ars: float = 0.0,
    i_usd: float = 0.0,
    exponential: bool = False,
) -> float:
    """Peso/dollar demand ratio, optionally tilted by exp(i_ars - i_usd) to
    express the rate-differential attraction of holding pesos."""
    if l_usd == 0.0:
        raise DivisionByZero(None, "relative demand denominator")
    ratio = l_ars / l_usd
    if exponential:
        ratio *= math.exp(i_ars - i_usd)
    return ratio


def devaluation_expectation(
    pi_arg: float,
    pi_usa: float,
    i_arg_short: float,
    i_usa_short: float,
    embi: float,
) -> float:
    """Covered interest parity adjusted by country risk.

    Inflation expectations and short rates are in percent; the risk spread
    is in basis points and enters divided by 100.
    """
    return pi_arg - pi_usa + i_arg_short - i_usa_short - embi / 100.0


def inflation_forecast(pi_exp: float, m: float, c: StructuralCoefficients) -> float:
    return pi_exp * c.gamma1 + m * c.gamma2 + c.inflation_intercept


def income(
    m_ars: float, lending_borrowing: float, c: StructuralCoefficients
) -> float:
    return m_ars * c.delta1 + lending_borrowing * c.delta2 + c.income_intercept


def expectation_step(
    pi_t: float,
    i_real_t: float,
    delta_e_t: float,
    p: ExpectationDynamicsParams,
    noise: float = 0.0,
) -> float:
    """One step of the expectation recursion:
    pi(t+1) = a*pi(t) + b*i_real(t) + c*dE(t) + noise."""
    return p.a * pi_t + p.b * i_real_t + p.c * delta_e_t + noise


def expectation_star(
    pi: float, e: float, p: ExpectationDynamicsParams | None = None
) -> float:
    """Group operation pi * E = pi + E + eta(pi, E); plain addition when the
    correction term is absent, making 0 the neutral element."""
    eta = p.eta if p is not None else None
    correction = eta(pi, e) if eta is not None else 0.0
    return pi + e + correction


def toy_demand_pesos(
    y: float, i_p: float, pi_e: float, p: ToyDemandParams = TOY_DEFAULTS
) -> float:
    """Y / ((1 + i_P) * exp(C * pi_e)); strictly decreasing in both the peso
    rate and expected inflation for positive income."""
    if i_p <= -1.0:
        raise ValueError("peso rate must exceed -1")
    return y / ((1.0 + i_p) * math.exp(p.C * pi_e))


def toy_demand_usd(
    pi_e: float, i_d: float, p: ToyDemandParams = TOY_DEFAULTS
) -> float:
    """A * (1 + B * pi_e**k) / (1 + i_D)."""
    if i_d <= -1.0:
        raise ValueError("dollar rate must exceed -1")
    return p.A * (1.0 + p.B * pi_e**p.k) / (1.0 + i_d)


# -- calibration ---------------------------------------------------------------


@dataclass(frozen=True)
class ProxyMap:
    """Observable series standing in for the model quantities when fitting.

    The schema offers no direct demand or expectation observables, so money
    aggregates proxy demands and the GDP level proxies income; every choice
    is overridable.
    """

    peso_demand: str = "M2"
    dollar_demand: str = "M2 Usd"
    income: str = "Gdp_argentina"
    inflation: str = "Ipc Argentina"
    peso_rate: str = "Long Interest"
    dollar_rate: str = "Long Term Usd Rate"
    peso_inflation_exp: str = "Pi Exp"
    dollar_inflation_exp: str = "Usa Pi Exp"
    money_supply: str = "M2"
    lending_borrowing: str = "Argentina Net Lending Borrowing"
    peso_short_rate: str = "Short Interest"
    dollar_short_rate: str = "Short Term Usd Rate"
    risk_spread: str = "Embi+ARG"
    observed_rate: str = "Historical Ars Usd"


DEFAULT_PROXIES = ProxyMap()


@dataclass(frozen=True)
class CalibrationResult:
    coefficients: StructuralCoefficients
    r_squared: dict[str, float]


def _design(panel: Panel, names: list[str], intercept: bool) -> np.ndarray:
    cols = [panel.column(n).to_array() for n in names]
    if intercept:
        cols.append(np.ones(panel.n_rows))
    X = np.column_stack(cols)
    if np.isnan(X).any():
        raise ValueError("calibration panel contains missing values; clean first")
    return X


def _fit_equation(
    panel: Panel, target: str, regressors: list[str], intercept: bool
) -> tuple[np.ndarray, float]:
    y = panel.column(target).to_array()
    if np.isnan(y).any():
        raise ValueError("calibration panel contains missing values; clean first")
    X = _design(panel, regressors, intercept)
    if panel.n_rows < X.shape[1]:
        raise InsufficientRows(
            f"{panel.n_rows} rows cannot identify {X.shape[1]} coefficients "
            f"for {target!r}"
        )
    fit = qr_least_squares(X, y)
    return fit.beta, r_squared(y, fit.residuals)


def calibrate(
    panel: Panel,
    proxies: ProxyMap = DEFAULT_PROXIES,
    include_intercepts: bool = True,
) -> CalibrationResult:
    """Ordinary least squares fit of each model equation against the panel.

    Returns the recovered coefficients together with per-equation R². Signs
    follow the equation conventions: the expectation terms of the demand
    equations enter negated, so their fitted slopes are reported as the
    positive-sign sensitivities alpha3/beta3.
    """
    px = proxies
    ars_beta, ars_r2 = _fit_equation(
        panel,
        px.peso_demand,
        [px.income, px.peso_rate, px.peso_inflation_exp],
        include_intercepts,
    )
    usd_beta, usd_r2 = _fit_equation(
        panel,
        px.dollar_demand,
        [px.income, px.dollar_rate, px.dollar_inflation_exp],
        include_intercepts,
    )
    pi_beta, pi_r2 = _fit_equation(
        panel,
        px.inflation,
        [px.peso_inflation_exp, px.money_supply],
        include_intercepts,
    )
    y_beta, y_r2 = _fit_equation(
        panel,
        px.income,
        [px.money_supply, px.lending_borrowing],
        include_intercepts,
    )

    def opt(vec: np.ndarray, k: int) -> float:
        return float(vec[k]) if include_intercepts else 0.0

    coefficients = StructuralCoefficients(
        alpha1=float(ars_beta[0]),
        alpha2=float(ars_beta[1]),
        alpha3=-float(ars_beta[2]),
        beta1=float(usd_beta[0]),
        beta2=float(usd_beta[1]),
        beta3=-float(usd_beta[2]),
        gamma1=float(pi_beta[0]),
        gamma2=float(pi_beta[1]),
        delta1=float(y_beta[0]),
        delta2=float(y_beta[1]),
        ars_intercept=opt(ars_beta, 3),
        usd_intercept=opt(usd_beta, 3),
        inflation_intercept=opt(pi_beta, 2),
        income_intercept=opt(y_beta, 2),
    )
    return CalibrationResult(
        coefficients,
        {
            "peso_demand": ars_r2,
            "dollar_demand": usd_r2,
            "inflation": pi_r2,
            "income": y_r2,
        },
    )


def simulate(
    panel: Panel,
    c: StructuralCoefficients,
    proxies: ProxyMap = DEFAULT_PROXIES,
    exponential_relative: bool = False,
) -> Panel:
    """Forecast panel: the input columns plus the model-implied series,
    prefixed ``model_``, for real-vs-forecast comparison.

    Computes peso/dollar demand, relative demand, the devaluation
    expectation, the inflation forecast and income per date.
    """
    px = proxies
    y = panel.column(px.income)
    i_ars = panel.column(px.peso_rate)
    i_usd = panel.column(px.dollar_rate)
    pi_ars = panel.column(px.peso_inflation_exp)
    pi_usd = panel.column(px.dollar_inflation_exp)
    short_ars = panel.column(px.peso_short_rate)
    short_usd = panel.column(px.dollar_short_rate)
    embi = panel.column(px.risk_spread)
    m2 = panel.column(px.money_supply)
    lending = panel.column(px.lending_borrowing)

    l_ars: list[float | None] = []
    l_usd: list[float | None] = []
    rel: list[float | None] = []
    e_model: list[float | None] = []
    pi_model: list[float | None] = []
    y_model: list[float | None] = []
    for t in range(panel.n_rows):
        row = (
            y[t], i_ars[t], i_usd[t], pi_ars[t], pi_usd[t],
            short_ars[t], short_usd[t], embi[t], m2[t], lending[t],
        )
        if any(v is None for v in row):
            l_ars.append(None)
            l_usd.append(None)
            rel.append(None)
            e_model.append(None)
            pi_model.append(None)
            y_model.append(None)
            continue
        la = demand_ars(y[t], i_ars[t], pi_ars[t], c)
        lu = demand_usd(y[t], i_usd[t], pi_usd[t], c)
        l_ars.append(la)
        l_usd.append(lu)
        if lu == 0.0:
            raise DivisionByZero(panel.dates[t], "model dollar demand")
        rel.append(
            relative_demand(la, lu, i_ars[t], i_usd[t], exponential_relative)
        )
        e_model.append(
            devaluation_expectation(
                pi_ars[t], pi_usd[t], short_ars[t], short_usd[t], embi[t]
            )
        )
        pi_model.append(inflation_forecast(pi_ars[t], m2[t], c))
        y_model.append(income(m2[t], lending[t], c))

    return panel.with_columns(
        {
            "model_L_ars": Series.of(l_ars),
            "model_L_usd": Series.of(l_usd),
            "model_relative_demand": Series.of(rel),
            "model_E": Series.of(e_model),
            "model_pi": Series.of(pi_model),
            "model_Y": Series.of(y_model),
        }
    )


def real_interest_rate(panel: Panel, proxies: ProxyMap = DEFAULT_PROXIES) -> Series:
    """Fisher-approximation real rate: nominal peso rate minus expected
    inflation; feeds the expectation recursion."""
    nominal = panel.column(proxies.peso_rate)
    expected = panel.column(proxies.peso_inflation_exp)
    return Series.of(
        None if (n is None or e is None) else n - e
        for n, e in zip(nominal.values, expected.values)
    )


def with_proxy_overrides(base: ProxyMap, overrides: dict[str, str]) -> ProxyMap:
    return replace(base, **overrides)
