"""Measured Hurst parameter of homogeneous On/Off traffic against (3 - beta)/2.

    python scripts/h_vs_beta.py --betas 1.2,1.5,1.8 --slots 1000000
"""
import argparse
import time

from selfsim.experiments import h_vs_beta


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--betas", default="1.1,1.2,1.3,1.4,1.5,1.6,1.7,1.8,1.9")
    ap.add_argument("--sources", type=int, default=100)
    ap.add_argument("--slots", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    betas = [float(b) for b in args.betas.split(",")]
    print("beta,h_expected,h_av,h_rs,seconds")
    for beta in betas:
        t0 = time.perf_counter()
        (row,) = h_vs_beta([beta], n_sources=args.sources, slots=args.slots, seed=args.seed,
                           warmup=args.slots // 100)
        print(f"{row.x},{row.h_expected:.3f},{row.h_av:.4f},{row.h_rs:.4f},"
              f"{time.perf_counter() - t0:.1f}", flush=True)


if __name__ == "__main__":
    main()
