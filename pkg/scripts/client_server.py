"""Hurst parameter of the client/server mix as the client count grows.

Clients have short On periods and long Off periods; a single server does the
opposite. Each row is one independent trace.
"""
import argparse

from selfsim.experiments import h_vs_nsources


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nsources", default="2,4,8,16,32,64")
    ap.add_argument("--slots", type=int, default=1_000_000)
    ap.add_argument("--seeds", default="0", help="comma list; one row per (N, seed)")
    args = ap.parse_args()

    print("n_clients,seed,h_av,h_rs")
    for seed in (int(s) for s in args.seeds.split(",")):
        for n in (int(v) for v in args.nsources.split(",")):
            (row,) = h_vs_nsources([n], slots=args.slots, seed=seed, warmup=args.slots // 100)
            print(f"{n},{seed},{row.h_av:.4f},{row.h_rs:.4f}", flush=True)


if __name__ == "__main__":
    main()
