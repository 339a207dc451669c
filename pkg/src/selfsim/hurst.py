"""Graphical Hurst estimators: aggregate variance and rescaled range (R/S).

Both methods fit a straight line in log10-log10 coordinates over a window of
the abscissa.  Aggregate variance regresses ``Var(X^(m))`` on ``m`` and uses
``H = 1 + slope / 2``; R/S regresses the mean ``R/S`` over blocks of size
``n`` on ``n`` and uses ``H = slope``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .traffic import TimeSeries

AV = "AggregateVariance"
RS = "RS"

#: log10 m window for aggregate variance
DEFAULT_AV_WINDOW = (1.0, 4.0)
_EDGE_TOL = 1e-12


class DegenerateSeriesError(ValueError):
    """Input has no dispersion where the estimator needs it."""


@dataclass(frozen=True)
class HurstEstimate:
    h: float
    slope: float
    intercept: float
    fit_window: tuple[float, float]
    r_squared: float
    method: str
    log_x: np.ndarray
    log_y: np.ndarray
    in_window: np.ndarray

    @property
    def out_of_range(self) -> bool:
        return not 0.0 < self.h < 1.0

    @property
    def points(self) -> list[tuple[float, float]]:
        """The (log10 x, log10 y) pairs used by the fit."""
        return list(zip(self.log_x[self.in_window].tolist(), self.log_y[self.in_window].tolist()))


def log_spaced(lo: int, hi: int, per_decade: int = 10) -> np.ndarray:
    """Distinct integers near ``10 ** (k / per_decade)`` between ``lo`` and ``hi``."""
    if hi < lo:
        return np.array([], dtype=np.int64)
    k0 = math.floor(per_decade * math.log10(lo))
    k1 = math.floor(per_decade * math.log10(hi) + 1e-9)
    vals = np.rint(10.0 ** (np.arange(k0, k1 + 1) / per_decade)).astype(np.int64)
    vals = vals[(vals >= lo) & (vals <= hi)]
    return np.unique(vals)


def _window_mask(log_x, window):
    lo, hi = window
    return (log_x >= lo - _EDGE_TOL) & (log_x <= hi + _EDGE_TOL)


def fit_loglog(points, window=(-math.inf, math.inf)) -> tuple[float, float, float]:
    """OLS on (log10 x, log10 y) restricted to ``window`` on log10 x.

    Returns ``(slope, intercept, r_squared)``.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if np.any(pts <= 0):
        raise ValueError("log-log fit needs positive coordinates")
    lx, ly = np.log10(pts[:, 0]), np.log10(pts[:, 1])
    return _ols(lx, ly, _window_mask(lx, window))


def _ols(lx, ly, mask):
    x, y = lx[mask], ly[mask]
    if x.size < 3:
        raise ValueError(f"need >= 3 points inside the fit window, got {x.size}")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise ValueError("fit window points share one abscissa")
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    ss_tot = np.sum((y - ym) ** 2)
    ss_res = np.sum((y - (intercept + slope * x)) ** 2)
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return float(slope), float(intercept), float(r2)


def _counts(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.counts
    return np.asarray(series, dtype=float)


def aggregate_series(series: TimeSeries, m: int) -> TimeSeries:
    """Means of consecutive non-overlapping blocks of ``m`` bins.

    A trailing partial block is dropped and the bin width scales by ``m``.
    """
    x = series.counts
    if m < 1 or m > x.size:
        raise ValueError(f"aggregation level must be in [1, {x.size}], got {m}")
    k = x.size // m
    return TimeSeries(x[: k * m].reshape(k, m).mean(axis=1), series.bin_width * m)


def _finish(method, slope, intercept, r2, window, lx, ly, mask, h):
    est = HurstEstimate(h, slope, intercept, tuple(window), r2, method, lx, ly, mask)
    if est.out_of_range:
        warnings.warn(f"{method} estimate h={h:.4f} lies outside (0, 1)", RuntimeWarning,
                      stacklevel=3)
    return est


def variance_aggregate_estimate(series: TimeSeries, m_values=None,
                                fit_window=DEFAULT_AV_WINDOW) -> HurstEstimate:
    x = _counts(series)
    n = x.size
    if m_values is None:
        m_values = log_spaced(1, n // 4)
    m_values = np.asarray(m_values, dtype=np.int64)
    if m_values.size == 0 or m_values.min() < 1 or n < 4 * m_values.max():
        raise ValueError("series too short: need >= 4 blocks at the largest aggregation level")
    var = np.empty(m_values.size)
    for j, m in enumerate(m_values):
        k = n // m
        var[j] = x[: k * m].reshape(k, m).mean(axis=1).var()
    lx = np.log10(m_values.astype(float))
    mask = _window_mask(lx, fit_window)
    if np.any(var[mask] <= 0):
        raise DegenerateSeriesError("zero aggregated variance inside the fit window")
    with np.errstate(divide="ignore"):
        ly = np.log10(var)
    slope, intercept, r2 = _ols(lx, ly, mask)
    return _finish(AV, slope, intercept, r2, fit_window, lx, ly, mask, 1.0 + slope / 2.0)


def rs_statistic(block) -> float:
    """Rescaled adjusted range of one block (population std, W_0 = 0 included)."""
    x = np.asarray(block, dtype=float)
    if x.size < 2:
        raise ValueError("block needs >= 2 values")
    s = x.std()
    if s == 0:
        raise DegenerateSeriesError("block has zero dispersion")
    w = np.cumsum(x - x.mean())
    r = max(w.max(), 0.0) - min(w.min(), 0.0)
    return float(r / s)


def _mean_rs(x: np.ndarray, n: int) -> float:
    k = x.size // n
    b = x[: k * n].reshape(k, n)
    s = b.std(axis=1)
    ok = s > 0
    if not ok.any():
        return math.nan
    b, s = b[ok], s[ok]
    w = np.cumsum(b - b.mean(axis=1, keepdims=True), axis=1)
    r = np.maximum(w.max(axis=1), 0.0) - np.minimum(w.min(axis=1), 0.0)
    return float(np.mean(r / s))


def rs_estimate(series: TimeSeries, n_values=None, fit_window=None) -> HurstEstimate:
    """R/S estimate over non-overlapping blocks starting at index 0.

    Constant blocks are left out of the per-size mean.  The default window runs
    from log10 n = 1 to log10(len / 4).
    """
    x = _counts(series)
    size = x.size
    if n_values is None:
        n_values = log_spaced(8, size // 4)
    n_values = np.asarray(n_values, dtype=np.int64)
    if n_values.size == 0 or n_values.min() < 2 or size < n_values.max():
        raise ValueError("series shorter than the largest block size")
    if fit_window is None:
        fit_window = (1.0, math.log10(size / 4))
    rs = np.array([_mean_rs(x, int(n)) for n in n_values])
    if np.isnan(rs).any():
        bad = n_values[np.isnan(rs)].tolist()
        raise DegenerateSeriesError(f"every block is constant at block sizes {bad}")
    lx = np.log10(n_values.astype(float))
    ly = np.log10(rs)
    mask = _window_mask(lx, fit_window)
    slope, intercept, r2 = _ols(lx, ly, mask)
    return _finish(RS, slope, intercept, r2, fit_window, lx, ly, mask, slope)
