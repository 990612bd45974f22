"""Log-space linear fits for data-scaling curves.

Two relationships are fitted by ordinary least squares, natural log
throughout:

* loss vs. training tokens, ``log L = -a * log D + b``
* downstream metric vs. loss, ``metric = slope * log(loss) + intercept``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

# Reference lines as (a, b) for loss fits and (slope, intercept) for metric fits.
OCR_LOSS = (0.1817, -0.7011)
GROUNDING_LOSS = (0.0785, -0.0745)
CHARTQA_VS_OCR_LOSS = (-0.0968, 0.7139)
INFOVQA_VS_OCR_LOSS = (-0.1488, 0.5319)


@dataclass(frozen=True)
class PowerLawFit:
    a: float
    b: float
    residual_rms: float = 0.0

    def predict(self, d):
        return predict_loss(self, d)


@dataclass(frozen=True)
class MetricFit:
    slope: float
    intercept: float
    residual_rms: float = 0.0

    def predict(self, loss):
        return predict_metric(self, loss)


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    if x.size < 2 or np.ptp(x) == 0:
        raise ValueError("need at least two distinct x values to fit a line")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    slope = float(np.dot(dx, y - ym) / np.dot(dx, dx))
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    return slope, intercept, float(np.sqrt(np.mean(resid**2)))


def _columns(points: Iterable) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(list(points), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be a sequence of (x, y) pairs")
    return arr[:, 0], arr[:, 1]


def fit_loglog(points: Iterable[tuple[float, float]]) -> PowerLawFit:
    """Fit ``log L = -a log D + b`` to ``(D, L)`` pairs."""
    d, loss = _columns(points)
    if np.any(d <= 0) or np.any(loss <= 0):
        raise ValueError("token counts and losses must be positive")
    slope, intercept, rms = _ols(np.log(d), np.log(loss))
    return PowerLawFit(a=-slope, b=intercept, residual_rms=rms)


def predict_loss(fit: PowerLawFit, d):
    return np.exp(-fit.a * np.log(d) + fit.b)


def fit_metric_vs_logloss(points: Iterable[tuple[float, float]]) -> MetricFit:
    """Fit ``metric = slope * log(loss) + intercept`` to ``(loss, metric)`` pairs."""
    loss, metric = _columns(points)
    if np.any(loss <= 0):
        raise ValueError("losses must be positive")
    slope, intercept, rms = _ols(np.log(loss), metric)
    return MetricFit(slope=slope, intercept=intercept, residual_rms=rms)


def predict_metric(fit: MetricFit, loss):
    return fit.slope * np.log(loss) + fit.intercept


def loglog_points(a: float, b: float, d_values) -> list[tuple[float, float]]:
    """Synthetic ``(D, L)`` samples lying exactly on ``log L = -a log D + b``."""
    d = np.asarray(d_values, dtype=float)
    return list(zip(d.tolist(), np.exp(-a * np.log(d) + b).tolist()))


def metric_points(slope: float, intercept: float, losses) -> list[tuple[float, float]]:
    loss = np.asarray(losses, dtype=float)
    return list(zip(loss.tolist(), (slope * np.log(loss) + intercept).tolist()))
