"""Performance series, improvement rate via log-log regression, and gamma.

The improvement rate alpha of a defence is the slope of an ordinary
least-squares fit of ln(value) against ln(period): the exponent of the
power law the metric follows over time. Intrinsic difficulty gamma closes
the model: gamma = 1 / (alpha * d_e), and inversely a predicted alpha is
1 / (gamma * (d* - beta * d_b)).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, InsufficientDataError


class Metric(str, Enum):
    DETECTION_RATE = "detection_rate"
    PREVENTION_RATE = "prevention_rate"
    FALSE_POSITIVE_RATE = "false_positive_rate"
    SYSTEM_IMPACT = "system_impact"


@dataclass(frozen=True)
class MetricPoint:
    period: int
    value: float


@dataclass(frozen=True)
class MetricSeries:
    """Timestamped percentages for one metric.

    Periods are ordinal integers starting at 1 (so logarithms are always
    defined), strictly increasing; values must be strictly positive. A
    ``note`` marks provenance (e.g. synthetic data).
    """

    metric: Metric
    points: tuple[MetricPoint, ...]
    note: str = ""

    def __post_init__(self):
        if not self.points:
            raise DomainError(f"{self.metric.value}: series must contain at least one point")
        if self.points[0].period != 1:
            raise DomainError(
                f"{self.metric.value}: periods must start at 1, got {self.points[0].period}"
            )
        last = 0
        for p in self.points:
            if p.period <= last:
                raise DomainError(
                    f"{self.metric.value}: periods must be strictly increasing "
                    f"(period {p.period} after {last})"
                )
            last = p.period
            if p.value <= 0:
                raise DomainError(
                    f"{self.metric.value}: value must be strictly positive at period "
                    f"{p.period}, got {p.value}; re-bucket the data instead of clamping"
                )


@dataclass(frozen=True)
class RegressionFit:
    """OLS fit in log-log space. ``slope`` is the improvement rate alpha."""

    slope: float
    intercept: float
    r_squared: float
    n_points: int


@dataclass(frozen=True)
class GammaEstimate:
    """alpha, d_e and the gamma that ties them: gamma * alpha * d_e = 1."""

    alpha: float
    d_e: float
    gamma: float


def fit_alpha(series: MetricSeries) -> RegressionFit:
    """Fit ln(value) = intercept + slope * ln(period) by ordinary least squares.

    Needs at least 3 points. Deterministic for identical input; for a
    noiseless power law the slope recovers the exponent to machine
    precision. A constant series fits slope 0 with r_squared 1 (the flat
    line reproduces the data exactly).
    """
    if len(series.points) < 3:
        raise InsufficientDataError(
            f"{series.metric.value}: regression needs at least 3 points, got {len(series.points)}"
        )
    x = np.log([p.period for p in series.points])
    y = np.log([p.value for p in series.points])
    if np.all(y == y[0]):
        # constant series: the flat line reproduces the data exactly
        return RegressionFit(
            slope=0.0, intercept=float(y[0]), r_squared=1.0, n_points=len(series.points)
        )
    x_mean = x.mean()
    y_mean = y.mean()
    sxx = float(np.sum((x - x_mean) ** 2))
    sxy = float(np.sum((x - x_mean) * (y - y_mean)))
    slope = sxy / sxx
    intercept = float(y_mean - slope * x_mean)
    residuals = y - (intercept + slope * x)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - y_mean) ** 2))
    if ss_tot == 0.0:
        r_squared = 1.0 if ss_res < 1e-24 else 0.0
    else:
        r_squared = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return RegressionFit(
        slope=float(slope), intercept=intercept, r_squared=r_squared, n_points=len(series.points)
    )


def estimate_gamma(alpha: float, d_e: float) -> GammaEstimate:
    """gamma = 1 / (alpha * d_e); both inputs must be strictly positive."""
    if alpha <= 0:
        raise DomainError(f"alpha must be strictly positive to estimate gamma, got {alpha}")
    if d_e <= 0:
        raise DomainError(f"d_e must be strictly positive to estimate gamma, got {d_e}")
    return GammaEstimate(alpha=alpha, d_e=d_e, gamma=1.0 / (alpha * d_e))


def predict_alpha(gamma: float, d_star: float, beta: float, d_b: float) -> float:
    """Model-predicted improvement rate: 1 / (gamma * (d* - beta * d_b))."""
    if gamma <= 0:
        raise DomainError(f"gamma must be strictly positive, got {gamma}")
    effective = d_star - beta * d_b
    if effective <= 0:
        raise DomainError(
            f"effective complexity must be strictly positive, got {effective} "
            f"(d_star={d_star}, beta={beta}, d_b={d_b})"
        )
    return 1.0 / (gamma * effective)
