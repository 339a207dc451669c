"""Slot-synchronous contention element (single FIFO queue).

Per slot, in order: arrivals join, whatever exceeds the free capacity is
dropped, then up to the slot's service quota leaves.  Occupancy is recorded
after service.  Real-valued arrival counts are turned into whole packets with
:func:`~selfsim.traffic.floor_carry` before the first slot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .heavy_tail import ParetoParams
from .hurst import variance_aggregate_estimate
from .traffic import TimeSeries, floor_carry, generate_onoff, generate_poisson, SourceConfig

DETERMINISTIC = "det"
EXPONENTIAL = "exp"


@dataclass(frozen=True)
class ServiceConfig:
    kind: str = DETERMINISTIC
    rate_or_mean: float = 1.0

    def __post_init__(self):
        if self.kind not in (DETERMINISTIC, EXPONENTIAL):
            raise ValueError(f"unknown service kind {self.kind!r}")
        if not (self.rate_or_mean > 0 and math.isfinite(self.rate_or_mean)):
            raise ValueError(f"service rate must be positive, got {self.rate_or_mean!r}")

    @classmethod
    def parse(cls, spec: str) -> "ServiceConfig":
        """Parse ``det:RATE`` or ``exp:MEAN``."""
        kind, sep, value = spec.partition(":")
        if not sep:
            raise ValueError(f"service spec must look like det:RATE or exp:MEAN, got {spec!r}")
        try:
            v = float(value)
        except ValueError:
            raise ValueError(f"bad service value in {spec!r}") from None
        return cls(kind.strip().lower(), v)

    def __str__(self):
        return f"{self.kind}:{self.rate_or_mean:g}"

    def quotas(self, slots: int, seed: int) -> np.ndarray:
        """Packets the server may remove in each slot."""
        if self.kind == DETERMINISTIC:
            return floor_carry(np.full(slots, self.rate_or_mean))
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0xE5,)))
        return np.floor(rng.exponential(self.rate_or_mean, slots) + 0.5).astype(np.int64)


def _scalar(x):
    return x.item() if np.ndim(x) == 0 else x


@dataclass
class QueueStats:
    """Outcome of one run, or of a batch of runs when ``occupancy`` is 2-D.

    For a batch the scalar fields become arrays with one entry per path.
    """

    occupancy: np.ndarray
    lost: int
    served: int
    arrived: int
    #: largest queue length right after arrivals, before any drop or service
    peak_backlog: int = 0

    @property
    def mean_occupancy(self) -> float:
        return _scalar(self.occupancy.mean(axis=-1))

    @property
    def max_occupancy(self) -> int:
        return _scalar(self.occupancy.max(axis=-1))

    @property
    def final_occupancy(self) -> int:
        return _scalar(self.occupancy[..., -1])


def _arrival_counts(arrivals) -> np.ndarray:
    counts = arrivals.counts if isinstance(arrivals, TimeSeries) else np.asarray(arrivals)
    if counts.dtype.kind not in "iuf":
        counts = counts.astype(float)
    if counts.ndim not in (1, 2) or counts.shape[-1] == 0:
        raise ValueError("arrivals are empty")
    if np.any(counts < 0):
        raise ValueError("arrival counts must be nonnegative")
    if counts.dtype.kind in "iu":
        return counts.astype(np.int64, copy=False)
    return floor_carry(counts)


def simulate_queue(arrivals, service: ServiceConfig, capacity: float = math.inf,
                   seed: int = 0) -> QueueStats:
    """Run the slot rule over ``arrivals``.

    ``arrivals`` is a :class:`TimeSeries`, a 1-D count sequence, or a 2-D
    array holding one path per row; all rows share the service sample path.
    """
    a = _arrival_counts(arrivals)
    s = service.quotas(a.shape[-1], seed)
    if capacity < 0:
        raise ValueError("capacity must be >= 0")
    if math.isinf(capacity):
        return _lindley(a, s)
    if a.ndim == 2:
        return _batch(a, s, int(capacity))
    cap = int(capacity)
    occ = np.empty(a.size, dtype=np.int64)
    q = lost = served = peak = 0
    for k, (ak, sk) in enumerate(zip(a.tolist(), s.tolist())):
        q += ak
        if q > peak:
            peak = q
        if q > cap:
            lost += q - cap
            q = cap
        out = sk if sk < q else q
        served += out
        q -= out
        occ[k] = q
    return QueueStats(occ, lost, served, int(a.sum()), peak)


def _batch(a: np.ndarray, s: np.ndarray, cap: int) -> QueueStats:
    paths, slots = a.shape
    a = np.asfortranarray(a)
    occ = np.empty_like(a, order="F")
    q = np.zeros(paths, dtype=np.int64)
    lost = np.zeros_like(q)
    served = np.zeros_like(q)
    peak = np.zeros_like(q)
    for k in range(slots):
        q += a[:, k]
        np.maximum(peak, q, out=peak)
        over = np.maximum(q - cap, 0)
        lost += over
        q -= over
        out = np.minimum(q, s[k])
        served += out
        q -= out
        occ[:, k] = q
    return QueueStats(occ, lost, served, a.sum(axis=-1), peak)


def _lindley(a: np.ndarray, s: np.ndarray) -> QueueStats:
    # q_k = S_k - min(0, min_{j<=k} S_j) with S the running sum of a - s
    S = np.cumsum(a - s, axis=-1)
    occ = S - np.minimum(np.minimum.accumulate(S, axis=-1), 0)
    before = a + np.concatenate((np.zeros_like(occ[..., :1]), occ[..., :-1]), axis=-1)
    arrived = a.sum(axis=-1)
    return QueueStats(occ, _scalar(np.zeros_like(arrived)), _scalar(arrived - occ[..., -1]),
                      _scalar(arrived), _scalar(before.max(axis=-1)))


def min_buffer_zero_loss(arrivals, service: ServiceConfig, seed: int = 0, width: int = 1) -> int:
    """Smallest capacity (in units of ``width`` packets) that loses nothing.

    Equal to the peak pre-service backlog of an unbounded run on the same
    service sample path.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    peak = simulate_queue(arrivals, service, math.inf, seed).peak_backlog
    return _scalar(-(-np.asarray(peak) // width))


@dataclass(frozen=True)
class OnOffParams:
    """Homogeneous On/Off generator settings used by sweeps.

    Few fast sources keep the arrival burstiness above the exponential service
    noise; with ~100 slow sources the queue barely sees the traffic's H.
    """

    n_sources: int = 3
    alpha: float = 1.0
    slots: int = 1_000_000
    bin_width: float = 1.0
    warmup: int = 10_000


@dataclass(frozen=True)
class SweepRow:
    h_requested: float
    beta: float
    h_measured: float
    mean_occupancy: float
    zero_loss_buffer: int
    arrival_mean: float
    model: str = "onoff"


def sweep_buffer_vs_h(h_targets: Sequence[float], gen_params: OnOffParams = OnOffParams(),
                      service: ServiceConfig = ServiceConfig(EXPONENTIAL, 10.0), seed: int = 0,
                      utilization: float = 0.8, width: int = 1,
                      poisson_baseline: bool = False) -> list[SweepRow]:
    """Queue demand of On/Off traffic generated for each target H.

    Each target maps to ``beta = 3 - 2h`` for both On and Off periods, so
    sources are On half the time and the per-source rate is set to give an
    arrival mean of ``utilization`` times the service mean.  Every row uses
    the same ``seed``.
    """
    if not 0 < utilization < 1:
        raise ValueError("utilization must be in (0, 1)")
    for h in h_targets:
        if not 0.5 < h < 1:
            raise ValueError(f"h target must be in (0.5, 1), got {h}")
    g = gen_params
    load = utilization * service.rate_or_mean
    rows = []
    if poisson_baseline:
        ts = generate_poisson(load / g.bin_width, g.slots, g.bin_width, seed)
        rows.append(_row(0.5, math.nan, ts, service, seed, width, "poisson"))
    for h in h_targets:
        beta = 3.0 - 2.0 * h
        p = ParetoParams(g.alpha, beta)
        cfg = SourceConfig(load / (g.n_sources * g.bin_width * 0.5), p, p)
        ts = generate_onoff([cfg] * g.n_sources, g.slots, g.bin_width, seed, warmup=g.warmup)
        rows.append(_row(h, beta, ts, service, seed, width, "onoff"))
    return rows


def _row(h, beta, ts, service, seed, width, model):
    stats = simulate_queue(ts, service, math.inf, seed)
    return SweepRow(
        h_requested=h,
        beta=beta,
        h_measured=variance_aggregate_estimate(ts).h,
        mean_occupancy=stats.mean_occupancy,
        zero_loss_buffer=-(-stats.peak_backlog // width),
        arrival_mean=float(ts.counts.mean()),
        model=model,
    )
