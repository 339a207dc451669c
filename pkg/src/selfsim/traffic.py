"""On/Off source superposition and the Poisson baseline.

Each source alternates between On (transmitting at ``rate_tx``) and Off, with
Pareto-distributed period lengths.  Time is continuous; a bin of width ``T``
collects ``rate_tx`` times the On time that falls inside it, so counts are
real-valued.

Random streams
--------------
Source ``i`` of a run seeded with ``seed`` draws from
``default_rng(SeedSequence(seed, spawn_key=(i,)))``.  Per source the draw
order is fixed: one standard normal for the initial phase (negative -> Off,
otherwise On), one uniform for the initial residual, then one uniform per
subsequent period.  :func:`generate_onoff` consumes draws in exactly the order
:func:`source_step` would, so both routes see the same sample path.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .heavy_tail import ParetoParams, pareto_mean, pareto_sample


class Phase(enum.IntEnum):
    OFF = 0
    ON = 1


@dataclass(frozen=True)
class SourceConfig:
    rate_tx: float = 1.0
    on_dist: ParetoParams = field(default_factory=ParetoParams)
    off_dist: ParetoParams = field(default_factory=ParetoParams)

    def __post_init__(self):
        if not self.rate_tx > 0:
            raise ValueError(f"rate_tx must be > 0, got {self.rate_tx!r}")

    def dist(self, phase: Phase) -> ParetoParams:
        return self.on_dist if phase == Phase.ON else self.off_dist

    @property
    def on_fraction(self) -> float:
        """Long-run fraction of time spent On (nan if either mean is infinite)."""
        m_on, m_off = pareto_mean(self.on_dist), pareto_mean(self.off_dist)
        if math.isinf(m_on) or math.isinf(m_off):
            return math.nan
        return m_on / (m_on + m_off)


@dataclass(frozen=True)
class SourceState:
    phase: Phase
    residual: float

    def __post_init__(self):
        if self.residual < 0:
            raise ValueError("residual must be >= 0")


@dataclass(frozen=True)
class TimeSeries:
    """Packet counts per bin of width ``bin_width``."""

    counts: np.ndarray
    bin_width: float = 1.0

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=float)
        if counts.ndim != 1:
            raise ValueError("counts must be one-dimensional")
        if counts.size and (not np.all(np.isfinite(counts)) or counts.min() < 0):
            raise ValueError("counts must be finite and nonnegative")
        if not self.bin_width > 0:
            raise ValueError(f"bin_width must be > 0, got {self.bin_width!r}")
        object.__setattr__(self, "counts", counts)

    def __len__(self):
        return self.counts.size

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.bin_width == other.bin_width and np.array_equal(self.counts, other.counts)

    def drop_warmup(self, n: int) -> "TimeSeries":
        return TimeSeries(self.counts[n:], self.bin_width)


def source_rng(seed: int, index: int) -> np.random.Generator:
    """Independent sub-stream for source ``index`` of a run seeded by ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def init_source(cfg: SourceConfig, rng: np.random.Generator, cap: float | None = None) -> SourceState:
    z = rng.standard_normal()
    phase = Phase.OFF if z < 0 else Phase.ON
    return SourceState(phase, pareto_sample(rng, cfg.dist(phase), cap=cap))


def init_sources(n: int, rng: np.random.Generator, cfg: SourceConfig | None = None,
                 cap: float | None = None) -> list[SourceState]:
    """Random initial phase and full fresh residual for ``n`` sources sharing ``rng``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    cfg = cfg or SourceConfig()
    return [init_source(cfg, rng, cap) for _ in range(n)]


def phase_times(state: SourceState, cfg: SourceConfig, T: float, rng: np.random.Generator,
                cap: float | None = None) -> tuple[float, float, SourceState]:
    """Advance one source by ``T``; return (on_time, off_time, new_state)."""
    if not T > 0:
        raise ValueError("T must be > 0")
    phase, residual = state.phase, state.residual
    remaining = T
    on = off = 0.0
    while residual <= remaining:
        if phase == Phase.ON:
            on += residual
        else:
            off += residual
        remaining -= residual
        phase = Phase(1 - phase)
        residual = pareto_sample(rng, cfg.dist(phase), cap=cap)
    if phase == Phase.ON:
        on += remaining
    else:
        off += remaining
    return on, off, SourceState(phase, residual - remaining)


def source_step(state: SourceState, cfg: SourceConfig, T: float, rng: np.random.Generator,
                cap: float | None = None) -> tuple[float, SourceState]:
    """Packets emitted by one source over the next bin, and its updated state."""
    on, _, new = phase_times(state, cfg, T, rng, cap)
    return cfg.rate_tx * on, new


def _period_lengths(state: SourceState, cfg: SourceConfig, horizon: float,
                    rng: np.random.Generator, cap: float | None) -> np.ndarray:
    """Period lengths starting with the current residual until ``horizon`` is covered."""
    chunks = [np.array([state.residual])]
    total = state.residual
    parity = 0  # periods drawn so far after the residual
    first = Phase(1 - state.phase)
    mean_cycle = pareto_mean(cfg.on_dist) + pareto_mean(cfg.off_dist)
    if math.isinf(mean_cycle):
        mean_cycle = 2.0 * (cfg.on_dist.alpha + cfg.off_dist.alpha)
    while total <= horizon:
        k = int(min(max(2.2 * (horizon - total) / mean_cycle, 64), 1 << 22))
        u = 1.0 - rng.random(k)
        phases = (first + parity + np.arange(k)) % 2
        d = np.empty(k)
        for ph in (Phase.OFF, Phase.ON):
            p = cfg.dist(ph)
            sel = phases == ph
            d[sel] = p.alpha * u[sel] ** (-1.0 / p.beta)
        if cap is not None:
            np.minimum(d, cap, out=d)
        c = np.cumsum(d) + total
        # keep only what is needed, so surplus draws never matter
        stop = int(np.searchsorted(c, horizon, side="right")) + 1
        stop = min(stop, k)
        chunks.append(d[:stop])
        total = c[stop - 1]
        parity += stop
    return np.concatenate(chunks)


def source_on_time(state: SourceState, cfg: SourceConfig, slots: int, T: float,
                   rng: np.random.Generator, cap: float | None = None) -> np.ndarray:
    """On time of one source inside each of ``slots`` bins, by exact overlap."""
    horizon = slots * T
    d = _period_lengths(state, cfg, horizon, rng, cap)
    on_mask = (np.arange(d.size) % 2 == 0) == (state.phase == Phase.ON)
    t = np.concatenate(([0.0], np.cumsum(d)))
    on_cum = np.concatenate(([0.0], np.cumsum(np.where(on_mask, d, 0.0))))
    edges = np.arange(slots + 1) * T
    on = np.diff(np.interp(edges, t, on_cum))
    return np.clip(on, 0.0, T)


def source_counts(cfg: SourceConfig, index: int, slots: int, T: float, seed: int,
                  cap: float | None = None) -> np.ndarray:
    """Packets per bin contributed by source ``index`` of a run seeded by ``seed``."""
    rng = source_rng(seed, index)
    state = init_source(cfg, rng, cap)
    return cfg.rate_tx * source_on_time(state, cfg, slots, T, rng, cap)


def floor_carry(values) -> np.ndarray:
    """Round reals to integers by flooring the running total along the last axis.

    The remainder carries forward, so ``sum(out)`` equals ``floor(sum(values))``.
    """
    values = np.asarray(values, dtype=float)
    # tolerance absorbs cumsum noise on values that are already integral
    cum = np.floor(np.cumsum(values, axis=-1) + 1e-9)
    return np.diff(cum, axis=-1, prepend=0.0).astype(np.int64)


def generate_onoff(sources: Sequence[SourceConfig], slots: int, T: float = 1.0, seed: int = 0,
                   cap: float | None = None, integer: bool = False,
                   warmup: int = 0) -> TimeSeries:
    """Aggregate traffic of independent On/Off sources.

    ``warmup`` extra leading bins are simulated and dropped, so the result
    always has ``slots`` bins.  ``integer=True`` floors counts with a carried
    remainder.
    """
    if len(sources) == 0:
        raise ValueError("at least one source is required")
    if slots < 1:
        raise ValueError("slots must be >= 1")
    if not T > 0:
        raise ValueError("T must be > 0")
    n = slots + warmup
    total = np.zeros(n)
    for i, cfg in enumerate(sources):
        total += source_counts(cfg, i, n, T, seed, cap)
    total = total[warmup:]
    if integer:
        total = floor_carry(total).astype(float)
    return TimeSeries(total, T)


def generate_poisson(lam: float, slots: int, T: float = 1.0, seed: int = 0) -> TimeSeries:
    """Independent Poisson counts with mean ``lam * T`` per bin."""
    if not lam > 0:
        raise ValueError("lambda must be > 0")
    if slots < 1:
        raise ValueError("slots must be >= 1")
    rng = np.random.default_rng(seed)
    return TimeSeries(rng.poisson(lam * T, slots).astype(float), T)


def cumulative(series: TimeSeries) -> np.ndarray:
    """Total traffic up to and including each bin."""
    if len(series) == 0:
        raise ValueError("series is empty")
    return np.cumsum(series.counts)


def homogeneous_sources(n: int, alpha: float = 1.0, beta_on: float = 1.5,
                        beta_off: float | None = None, rate: float = 1.0) -> list[SourceConfig]:
    beta_off = beta_on if beta_off is None else beta_off
    cfg = SourceConfig(rate, ParetoParams(alpha, beta_on), ParetoParams(alpha, beta_off))
    return [cfg] * n


def client_server_sources(n_clients: int, alpha: float = 1.0, client_rate: float = 1.0,
                          server_rate: float = 1.0, short_beta: float = 1.9,
                          long_beta: float = 1.1) -> list[SourceConfig]:
    """Clients talk briefly and idle long; the single server does the opposite."""
    if n_clients < 1:
        raise ValueError("n_clients must be >= 1")
    short, long_ = ParetoParams(alpha, short_beta), ParetoParams(alpha, long_beta)
    clients = [SourceConfig(client_rate, short, long_)] * n_clients
    server = SourceConfig(server_rate, long_, short)
    return clients + [server]


def scenario_client_server(n_clients: int, slots: int, T: float = 1.0, seed: int = 0,
                           **kwargs) -> TimeSeries:
    """Client/server LAN mix; clients are sources 0..n-1, the server is source n."""
    warmup = kwargs.pop("warmup", 0)
    return generate_onoff(client_server_sources(n_clients, **kwargs), slots, T, seed,
                          warmup=warmup)
