"""Per-date equilibrium exchange rate as the minimizer of three squared
penalty terms, with a derivative-free solver and its closed-form oracle.

Each penalty ties the candidate rate to one consolidating relation: the
US/Argentina GDP ratio, the risk-scaled observed rate, and the long-term
dollar rate. The sum of squared deviations is minimized per row, starting
from the observed rate; the analytic minimizer (the mean of the three
targets) doubles as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date as Date
from typing import Callable

from .errors import EmptyResult, NonFiniteObjective
from .panel import Panel


@dataclass(frozen=True)
class EquilibriumTargets:
    gdp_ratio: float            # gdp_usa / gdp_argentina
    risk_scaled_rate: float     # embi * observed ars/usd
    long_usd_rate: float        # percent

    def __post_init__(self) -> None:
        for value in (self.gdp_ratio, self.risk_scaled_rate, self.long_usd_rate):
            if not math.isfinite(value):
                raise ValueError("equilibrium targets must be finite")

    @staticmethod
    def from_values(
        gdp_usa: float,
        gdp_argentina: float,
        embi: float,
        ars_usd: float,
        long_usd_rate: float,
        embi_in_percent: bool = False,
    ) -> "EquilibriumTargets":
        if not gdp_argentina > 0:
            raise ValueError("gdp_argentina must be positive")
        spread = embi / 100.0 if embi_in_percent else embi
        return EquilibriumTargets(
            gdp_usa / gdp_argentina, spread * ars_usd, long_usd_rate
        )


def penalty(e: float, targets: EquilibriumTargets) -> float:
    """(e - t1)^2 + (e - t2)^2 + (e - t3)^2."""
    return (
        (e - targets.gdp_ratio) ** 2
        + (e - targets.risk_scaled_rate) ** 2
        + (e - targets.long_usd_rate) ** 2
    )


def analytic_equilibrium(targets: EquilibriumTargets) -> float:
    """The minimizer of a sum of squared deviations is the target mean."""
    return (
        targets.gdp_ratio + targets.risk_scaled_rate + targets.long_usd_rate
    ) / 3.0


@dataclass(frozen=True)
class NelderMeadConfig:
    x_tolerance: float = 1e-8
    f_tolerance: float = 1e-12
    max_iterations: int = 500
    initial_step: float | None = None   # None: max(0.05*|x0|, 0.1)
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5

    def __post_init__(self) -> None:
        if self.x_tolerance <= 0 or self.f_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if not (self.reflection > 0 and self.expansion > 1):
            raise ValueError("need reflection > 0 and expansion > 1")
        if not (0 < self.contraction < 1 and 0 < self.shrink < 1):
            raise ValueError("contraction and shrink must lie in (0, 1)")

    def step_for(self, x0: float) -> float:
        if self.initial_step is not None:
            return self.initial_step
        return max(0.05 * abs(x0), 0.1)


DEFAULT_CONFIG = NelderMeadConfig()


@dataclass(frozen=True)
class NelderMeadResult:
    x_min: float
    f_min: float
    iterations: int
    converged: bool     # False: stopped at max_iterations


def nelder_mead_1d(
    objective: Callable[[float], float],
    x0: float,
    config: NelderMeadConfig = DEFAULT_CONFIG,
) -> NelderMeadResult:
    """Simplex minimization in one dimension (a two-point simplex).

    Terminates when the simplex width is within ``x_tolerance`` and the
    f-spread within ``f_tolerance``; hitting ``max_iterations`` is reported
    through the ``converged`` flag rather than an exception.
    """

    def f(x: float) -> float:
        value = objective(x)
        if not math.isfinite(value):
            raise NonFiniteObjective(f"objective is {value!r} at x={x!r}")
        return value

    step = config.step_for(x0)
    best, worst = x0, x0 + step
    f_best, f_worst = f(best), f(worst)
    if f_worst < f_best:
        best, worst = worst, best
        f_best, f_worst = f_worst, f_best

    iterations = 0
    while iterations < config.max_iterations:
        if (
            abs(worst - best) <= config.x_tolerance
            and abs(f_worst - f_best) <= config.f_tolerance
        ):
            return NelderMeadResult(best, f_best, iterations, True)
        iterations += 1

        # centroid of all-but-worst is the best point itself
        reflected = best + config.reflection * (best - worst)
        f_reflected = f(reflected)
        if f_reflected < f_best:
            expanded = best + config.expansion * (best - worst)
            f_expanded = f(expanded)
            if f_expanded < f_reflected:
                worst, f_worst = expanded, f_expanded
            else:
                worst, f_worst = reflected, f_reflected
        elif f_reflected < f_worst:
            worst, f_worst = reflected, f_reflected
        else:
            contracted = best + config.contraction * (worst - best)
            f_contracted = f(contracted)
            if f_contracted < f_worst:
                worst, f_worst = contracted, f_contracted
            else:
                worst = best + config.shrink * (worst - best)
                f_worst = f(worst)
        if f_worst < f_best:
            best, worst = worst, best
            f_best, f_worst = f_worst, f_best
    return NelderMeadResult(best, f_best, iterations, False)


REQUIRED_COLUMNS = (
    "Gdp_usa",
    "Gdp_argentina",
    "Embi+ARG",
    "Historical Ars Usd",
    "Long Term Usd Rate",
)


@dataclass(frozen=True)
class EquilibriumSeries:
    dates: tuple[Date, ...]
    e_star: tuple[float, ...]
    penalty_at_min: tuple[float, ...]
    observed: tuple[float, ...]
    gap: tuple[float, ...]              # e_star - observed
    skipped_dates: tuple[Date, ...]     # rows with a missing input

    def __len__(self) -> int:
        return len(self.dates)


def solve_panel(
    panel: Panel,
    config: NelderMeadConfig = DEFAULT_CONFIG,
    embi_in_percent: bool = False,
) -> EquilibriumSeries:
    """Row-by-row minimization starting at the observed exchange rate.

    Rows missing any input are skipped and listed in the result. The risk
    spread multiplies the observed rate raw, exactly as the penalty is
    written; set ``embi_in_percent`` when the column stores percent instead
    of basis points.
    """
    columns = [panel.column(name) for name in REQUIRED_COLUMNS]
    dates: list[Date] = []
    e_star: list[float] = []
    penalties: list[float] = []
    observed: list[float] = []
    gaps: list[float] = []
    skipped: list[Date] = []
    for i, when in enumerate(panel.dates):
        cells = [col[i] for col in columns]
        if any(v is None for v in cells):
            skipped.append(when)
            continue
        gdp_usa, gdp_arg, embi, ars_usd, long_rate = cells
        targets = EquilibriumTargets.from_values(
            gdp_usa, gdp_arg, embi, ars_usd, long_rate, embi_in_percent
        )
        solution = nelder_mead_1d(lambda e: penalty(e, targets), ars_usd, config)
        dates.append(when)
        e_star.append(solution.x_min)
        penalties.append(solution.f_min)
        observed.append(ars_usd)
        gaps.append(solution.x_min - ars_usd)
    return EquilibriumSeries(
        tuple(dates),
        tuple(e_star),
        tuple(penalties),
        tuple(observed),
        tuple(gaps),
        tuple(skipped),
    )


@dataclass(frozen=True)
class GapReport:
    mean_gap: float
    max_abs_gap: float
    sign_runs: int      # maximal blocks of equal nonzero sign


def gap_report(result: EquilibriumSeries) -> GapReport:
    """Aggregate misalignment statistics of equilibrium vs observation."""
    if not result.gap:
        raise EmptyResult("no solved rows to report on")
    gaps = result.gap
    runs = 0
    previous = 0
    for g in gaps:
        sign = (g > 0) - (g < 0)
        if sign != 0 and sign != previous:
            runs += 1
        if sign != 0:
            previous = sign
    return GapReport(
        sum(gaps) / len(gaps),
        max(abs(g) for g in gaps),
        runs,
    )
