"""Hurst sweeps over the tail index and over the client/server population."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .hurst import rs_estimate, variance_aggregate_estimate
from .traffic import TimeSeries, generate_onoff, homogeneous_sources, scenario_client_server


@dataclass(frozen=True)
class HurstRow:
    x: float
    h_expected: float
    h_av: float
    h_rs: float


def estimate_both(series: TimeSeries) -> tuple[float, float]:
    return variance_aggregate_estimate(series).h, rs_estimate(series).h


def h_vs_beta(betas: Sequence[float], n_sources: int = 100, alpha: float = 1.0,
              rate: float = 1.0, slots: int = 1_000_000, T: float = 1.0, seed: int = 0,
              warmup: int = 0) -> list[HurstRow]:
    """Measured H of homogeneous On/Off traffic against ``(3 - beta) / 2``."""
    rows = []
    for beta in betas:
        ts = generate_onoff(homogeneous_sources(n_sources, alpha, beta, beta, rate), slots, T,
                            seed, warmup=warmup)
        rows.append(HurstRow(beta, (3.0 - beta) / 2.0, *estimate_both(ts)))
    return rows


def h_vs_nsources(counts: Sequence[int], alpha: float = 1.0, rate: float = 1.0,
                  slots: int = 1_000_000, T: float = 1.0, seed: int = 0,
                  warmup: int = 0) -> list[HurstRow]:
    """Measured H of the client/server mix as the number of clients grows."""
    rows = []
    for n in counts:
        ts = scenario_client_server(n, slots, T, seed, alpha=alpha, client_rate=rate,
                                    server_rate=rate, warmup=warmup)
        rows.append(HurstRow(n, float("nan"), *estimate_both(ts)))
    return rows
