"""Estimate H on the Bellcore Ethernet capture (e.g. BC-pAug89).

The public files list one packet per line as ``timestamp size``. Packets are
binned at ``--bin-width`` seconds (10 ms by default), optionally saved as a
count trace, and both estimators are reported. The saved trace is what
``pytest tests/test_acceptance.py --bellcore PATH`` expects.
"""
import argparse

import numpy as np

from selfsim.hurst import rs_estimate, variance_aggregate_estimate
from selfsim.trace_io import bin_timestamps, write_counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("packets", help="raw packet file: timestamp in column 1")
    ap.add_argument("--bin-width", type=float, default=0.01)
    ap.add_argument("--counts-out", help="write the binned count trace here")
    args = ap.parse_args()

    times = np.loadtxt(args.packets, usecols=0, ndmin=1)
    ts = bin_timestamps(times, args.bin_width)
    if args.counts_out:
        write_counts(ts, args.counts_out, comments=[f"binned from {args.packets}"])
    av = variance_aggregate_estimate(ts, fit_window=(1.0, 4.0))
    rs = rs_estimate(ts)
    print(f"packets={times.size} bins={len(ts)} bin_width={args.bin_width}")
    print(f"aggregate variance: h={av.h:.4f} slope={av.slope:.4f} r2={av.r_squared:.4f}")
    print(f"rescaled range:     h={rs.h:.4f} slope={rs.slope:.4f} r2={rs.r_squared:.4f}")


if __name__ == "__main__":
    main()
