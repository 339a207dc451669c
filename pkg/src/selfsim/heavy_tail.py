"""Pareto law used for every On/Off period duration.

The density is the standard normalized one,

    f(x) = (beta / alpha) * (alpha / x) ** (beta + 1),   x >= alpha,

and samples are drawn by inverse transform, ``alpha * u ** (-1 / beta)`` with
``u`` uniform on (0, 1].  For ``1 < beta < 2`` the mean is finite and the
variance infinite, which is the regime that produces long-range dependence
when many such sources are superposed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ParetoParams:
    """Scale ``alpha`` (minimum duration) and shape ``beta`` (tail index)."""

    alpha: float = 1.0
    beta: float = 1.5

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha!r}")
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta!r}")

    @property
    def is_lrd(self) -> bool:
        """True when the shape lies in the long-range-dependence regime (1, 2)."""
        return 1.0 < self.beta < 2.0


def pareto_pdf(x, p: ParetoParams):
    x = np.asarray(x, dtype=float)
    safe = np.where(x >= p.alpha, x, p.alpha)
    out = np.where(x >= p.alpha, (p.beta / p.alpha) * (p.alpha / safe) ** (p.beta + 1.0), 0.0)
    return float(out) if out.ndim == 0 else out


def pareto_cdf(x, p: ParetoParams):
    x = np.asarray(x, dtype=float)
    safe = np.where(x >= p.alpha, x, p.alpha)
    out = np.where(x >= p.alpha, 1.0 - (p.alpha / safe) ** p.beta, 0.0)
    return float(out) if out.ndim == 0 else out


def pareto_sf(x, p: ParetoParams):
    """Tail probability P(X > x)."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x >= p.alpha, x, p.alpha)
    out = np.where(x >= p.alpha, (p.alpha / safe) ** p.beta, 1.0)
    return float(out) if out.ndim == 0 else out


def pareto_quantile(u, p: ParetoParams):
    """Map ``u`` in (0, 1] to ``alpha * u ** (-1/beta)``.

    ``u`` plays the role of the survival probability, so ``u = 1`` gives
    ``alpha`` and ``u -> 0`` gives arbitrarily long durations.
    """
    u = np.asarray(u, dtype=float)
    out = p.alpha * u ** (-1.0 / p.beta)
    return float(out) if out.ndim == 0 else out


def pareto_sample(rng: np.random.Generator, p: ParetoParams, size=None, cap: float | None = None):
    """Draw Pareto durations from ``rng``.

    One uniform is consumed per sample, so drawing ``size=k`` at once yields
    the same values as ``k`` scalar calls on the same stream.  ``cap``
    truncates samples from above; it destroys long-range dependence and is
    off by default.
    """
    # rng.random() lives on [0, 1); flipping it gives (0, 1]
    u = 1.0 - rng.random(size)
    x = pareto_quantile(u, p)
    if cap is not None:
        x = np.minimum(x, cap)
        if size is None:
            x = float(x)
    return x


def pareto_mean(p: ParetoParams) -> float:
    """Closed-form mean; ``math.inf`` when ``beta <= 1``."""
    if p.beta <= 1.0:
        return math.inf
    return p.alpha * p.beta / (p.beta - 1.0)
