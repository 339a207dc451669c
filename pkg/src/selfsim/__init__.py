"""Self-similar traffic synthesis, Hurst estimation and buffer sizing."""

__version__ = "0.1.0"

from .heavy_tail import ParetoParams, pareto_cdf, pareto_mean, pareto_pdf, pareto_sample
from .hurst import (DegenerateSeriesError, HurstEstimate, aggregate_series, fit_loglog,
                    rs_estimate, rs_statistic, variance_aggregate_estimate)
from .queueing import (QueueStats, ServiceConfig, min_buffer_zero_loss, simulate_queue,
                       sweep_buffer_vs_h)
from .trace_io import read_counts, write_counts
from .traffic import (Phase, SourceConfig, SourceState, TimeSeries, cumulative, generate_onoff,
                      generate_poisson, init_sources, scenario_client_server, source_step)
