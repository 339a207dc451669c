"""Command-line front end: generate, estimate, simulate, sweep.

Every file or table written starts with ``#`` lines recording the toolkit
version and the fully resolved command, which reproduces the data lines
byte for byte.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import shlex
import sys
import warnings

from . import __version__
from .experiments import h_vs_beta, h_vs_nsources
from .hurst import (DEFAULT_AV_WINDOW, DegenerateSeriesError, rs_estimate,
                    variance_aggregate_estimate)
from .queueing import OnOffParams, ServiceConfig, min_buffer_zero_loss, simulate_queue, sweep_buffer_vs_h
from .trace_io import TraceFormatError, format_count, read_counts, write_counts
from .traffic import (TimeSeries, floor_carry, generate_onoff, generate_poisson,
                      homogeneous_sources, scenario_client_server)


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format_count(v)
    return str(v)


def manifest(sub: str, params: dict) -> list[str]:
    argv = ["selfsim", sub]
    for key, value in params.items():
        if value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        else:
            argv += [flag, _fmt(value) if not isinstance(value, (list, tuple))
                     else ",".join(_fmt(v) for v in value)]
    return [f"selfsim {__version__}", f"cmd: {shlex.join(argv)}"]


def _csv_text(header_lines, columns, rows) -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _float_list(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _int_list(text):
    return [int(t) for t in text.split(",") if t.strip()]


def _service(text):
    try:
        return ServiceConfig.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _capacity(text):
    if text.strip().lower() in ("inf", "infinite", "none"):
        return math.inf
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("capacity must be >= 0")
    return v


# --- generate ---------------------------------------------------------------

_ONOFF_ONLY = ("sources", "alpha", "beta_on", "beta_off", "rate", "cap")


def cmd_generate(args) -> int:
    model = args.model
    if model == "poisson":
        given = [k for k in _ONOFF_ONLY if getattr(args, k) is not None]
        if given:
            raise UsageError(f"--{given[0].replace('_', '-')} does not apply to --model poisson")
        if args.lam is None:
            raise UsageError("--model poisson requires --lambda")
        warmup = 0
        ts = generate_poisson(args.lam, args.slots, args.bin_width, args.seed)
        params = dict(model=model, lambda_=args.lam)
    else:
        if args.lam is not None:
            raise UsageError(f"--lambda does not apply to --model {model}")
        warmup = args.warmup if args.warmup is not None else args.slots // 100
        alpha = 1.0 if args.alpha is None else args.alpha
        rate = 1.0 if args.rate is None else args.rate
        if model == "onoff":
            n = 100 if args.sources is None else args.sources
            beta_on = 1.5 if args.beta_on is None else args.beta_on
            beta_off = beta_on if args.beta_off is None else args.beta_off
            ts = generate_onoff(homogeneous_sources(n, alpha, beta_on, beta_off, rate), args.slots,
                                args.bin_width, args.seed, cap=args.cap, integer=args.integer,
                                warmup=warmup)
            params = dict(model=model, sources=n, alpha=alpha, beta_on=beta_on,
                          beta_off=beta_off, rate=rate, cap=args.cap)
        else:
            if args.beta_on is not None or args.beta_off is not None or args.cap is not None:
                raise UsageError("client-server fixes its own tail indices; drop --beta-on/--beta-off/--cap")
            n = 32 if args.sources is None else args.sources
            ts = scenario_client_server(n, args.slots, args.bin_width, args.seed, alpha=alpha,
                                        client_rate=rate, server_rate=rate, warmup=warmup)
            if args.integer:
                ts = TimeSeries(floor_carry(ts.counts).astype(float), ts.bin_width)
            params = dict(model=model, sources=n, alpha=alpha, rate=rate)
    params.update(slots=args.slots, bin_width=args.bin_width, seed=args.seed, warmup=warmup,
                  integer=args.integer, out=args.out)
    params = {("lambda" if k == "lambda_" else k): v for k, v in params.items()}
    write_counts(ts, args.out, comments=manifest("generate", params))
    total = float(ts.counts.sum())
    print(f"total_packets={_fmt(total)} mean_rate={_fmt(total / (len(ts) * ts.bin_width))} "
          f"bins={len(ts)}")
    return 0


# --- estimate ---------------------------------------------------------------

def cmd_estimate(args) -> int:
    ts = read_counts(args.input)
    methods = ("av", "rs") if args.method == "both" else (args.method,)
    results = []
    for m in methods:
        if m == "av":
            window = (args.fit_min if args.fit_min is not None else DEFAULT_AV_WINDOW[0],
                      args.fit_max if args.fit_max is not None else DEFAULT_AV_WINDOW[1])
            est = variance_aggregate_estimate(ts, fit_window=window)
        else:
            window = None
            if args.fit_min is not None or args.fit_max is not None:
                window = (args.fit_min if args.fit_min is not None else 1.0,
                          args.fit_max if args.fit_max is not None else math.log10(len(ts) / 4))
            est = rs_estimate(ts, fit_window=window)
        results.append((m, est))
    head = manifest("estimate", dict(input=args.input, method=args.method, fit_min=args.fit_min,
                                     fit_max=args.fit_max, points_out=args.points_out))
    rows = [(m, e.h, e.slope, e.intercept, e.r_squared, e.fit_window[0], e.fit_window[1],
             int(e.in_window.sum()), e.out_of_range) for m, e in results]
    sys.stdout.write(_csv_text(head, ["method", "h", "slope", "intercept", "r_squared", "fit_min",
                                      "fit_max", "n_fit_points", "out_of_range"], rows))
    if args.points_out:
        pts = [(m, x, y, bool(w)) for m, e in results
               for x, y, w in zip(e.log_x.tolist(), e.log_y.tolist(), e.in_window.tolist())]
        _emit(_csv_text(head, ["method", "log10_x", "log10_y", "in_window"], pts), args.points_out)
    return 0


# --- simulate ---------------------------------------------------------------

def cmd_simulate(args) -> int:
    ts = read_counts(args.arrivals)
    stats = simulate_queue(ts, args.service, args.capacity, args.seed)
    zero_loss = min_buffer_zero_loss(ts, args.service, args.seed, args.width)
    head = manifest("simulate", dict(arrivals=args.arrivals, service=str(args.service),
                                     capacity="inf" if math.isinf(args.capacity) else args.capacity,
                                     seed=args.seed, width=args.width, out=args.out,
                                     occupancy_out=args.occupancy_out))
    cols = ["slots", "arrived", "served", "lost", "final_occupancy", "mean_occupancy",
            "max_occupancy", "peak_backlog", "zero_loss_buffer"]
    row = (len(ts), stats.arrived, stats.served, stats.lost, stats.final_occupancy,
           stats.mean_occupancy, stats.max_occupancy, stats.peak_backlog, zero_loss)
    _emit(_csv_text(head, cols, [row]), args.out)
    if args.occupancy_out:
        _emit(_csv_text(head, ["slot", "occupancy"], enumerate(stats.occupancy.tolist())),
              args.occupancy_out)
    return 0


# --- sweep ------------------------------------------------------------------

def cmd_sweep(args) -> int:
    warmup = args.warmup if args.warmup is not None else args.slots // 100
    common = dict(kind=args.kind, alpha=args.alpha, rate=args.rate, slots=args.slots,
                  bin_width=args.bin_width, warmup=warmup, seed=args.seed)
    if args.kind == "h-vs-beta":
        betas = args.betas or [1.2, 1.4, 1.6, 1.8]
        n = args.sources or 100
        rows = h_vs_beta(betas, n, args.alpha, args.rate, args.slots, args.bin_width, args.seed,
                         warmup)
        params = dict(common, betas=betas, sources=n)
        cols = ["beta", "h_expected", "h_av", "h_rs"]
        data = [(r.x, r.h_expected, r.h_av, r.h_rs) for r in rows]
    elif args.kind == "h-vs-nsources":
        counts = args.nsources or [4, 8, 16, 32, 64]
        rows = h_vs_nsources(counts, args.alpha, args.rate, args.slots, args.bin_width, args.seed,
                             warmup)
        params = dict(common, nsources=counts)
        cols = ["n_clients", "h_av", "h_rs"]
        data = [(int(r.x), r.h_av, r.h_rs) for r in rows]
    else:
        targets = args.h_targets or [0.55, 0.65, 0.75, 0.85]
        n = args.sources or OnOffParams.n_sources
        service = args.service or ServiceConfig("exp", 10.0)
        gen = OnOffParams(n, args.alpha, args.slots, args.bin_width, warmup)
        try:
            rows = sweep_buffer_vs_h(targets, gen, service, args.seed, args.utilization,
                                     args.width, args.poisson_baseline)
        except ValueError as e:
            raise UsageError(str(e)) from None
        common.pop("rate")
        params = dict(common, h_targets=targets, sources=n, service=str(service),
                      utilization=args.utilization, width=args.width,
                      poisson_baseline=args.poisson_baseline)
        cols = ["model", "h_requested", "beta", "h_measured", "arrival_mean", "mean_occupancy",
                "zero_loss_buffer"]
        data = [(r.model, r.h_requested, r.beta, r.h_measured, r.arrival_mean, r.mean_occupancy,
                 r.zero_loss_buffer) for r in rows]
    params["out"] = args.out
    _emit(_csv_text(manifest("sweep", params), cols, data), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="selfsim", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="synthesize a packet-count trace")
    g.add_argument("--model", choices=["onoff", "poisson", "client-server"], default="onoff")
    g.add_argument("--sources", type=int, help="On/Off sources, or clients for client-server")
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta-on", type=float)
    g.add_argument("--beta-off", type=float)
    g.add_argument("--rate", type=float, help="packets per time unit while On")
    g.add_argument("--lambda", dest="lam", type=float, help="Poisson rate per time unit")
    g.add_argument("--slots", type=int, default=100_000)
    g.add_argument("--bin-width", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--warmup", type=int, help="leading bins discarded (default 1%% of slots)")
    g.add_argument("--cap", type=float, help="truncate period lengths (breaks LRD)")
    g.add_argument("--integer", action="store_true", help="floor counts with carried remainder")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("estimate", help="estimate the Hurst parameter of a trace")
    e.add_argument("--input", required=True)
    e.add_argument("--method", choices=["av", "rs", "both"], default="both")
    e.add_argument("--fit-min", type=float)
    e.add_argument("--fit-max", type=float)
    e.add_argument("--points-out")
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("simulate", help="feed a trace through the contention element")
    s.add_argument("--arrivals", required=True)
    s.add_argument("--service", type=_service, required=True, help="det:RATE or exp:MEAN")
    s.add_argument("--capacity", type=_capacity, default=math.inf, help="K packets or inf")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--width", type=int, default=1, help="packets per reported buffer unit")
    s.add_argument("--out")
    s.add_argument("--occupancy-out")
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", help="figure-style parameter sweeps")
    w.add_argument("--kind", required=True, choices=["h-vs-beta", "h-vs-nsources", "buffer-vs-h"])
    w.add_argument("--betas", type=_float_list)
    w.add_argument("--nsources", type=_int_list)
    w.add_argument("--h-targets", type=_float_list)
    w.add_argument("--sources", type=int)
    w.add_argument("--alpha", type=float, default=1.0)
    w.add_argument("--rate", type=float, default=1.0)
    w.add_argument("--slots", type=int, default=1_000_000)
    w.add_argument("--bin-width", type=float, default=1.0)
    w.add_argument("--warmup", type=int)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--service", type=_service)
    w.add_argument("--utilization", type=float, default=0.8)
    w.add_argument("--width", type=int, default=1)
    w.add_argument("--poisson-baseline", action="store_true")
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _warn_to_stderr
            return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"selfsim {args.command}: error: {e}", file=sys.stderr)
        return 2
    except (DegenerateSeriesError, TraceFormatError, OSError, ValueError) as e:
        print(f"selfsim {args.command}: error: {e}", file=sys.stderr)
        return 1


def _warn_to_stderr(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
