"""Sweep honest runs over schemes, sizes, and seeds; print a timing table.

Usage: python3 scripts/honest_sweep.py [--seeds 50] [--sizes 1,2,4,8,16]
"""

import argparse
import time

from aqs_lab import RunConfig, run_scheme


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=50)
    parser.add_argument("--sizes", default="1,2,4,8,16")
    parser.add_argument("--comparator", default="exact")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'scheme':>6} {'n':>4} {'runs':>5} {'accepted':>8} "
          f"{'min_fid':>12} {'ms/run':>8}")
    failures = 0
    for scheme in (1, 2):
        for n in sizes:
            started = time.perf_counter()
            accepted = 0
            worst = 1.0
            for seed in range(args.seeds):
                _, verdict = run_scheme(
                    scheme,
                    RunConfig(n=n, seed=seed, comparator=args.comparator),
                )
                accepted += verdict.accepted
                worst = min(worst, min(verdict.fidelities))
            per_run = (time.perf_counter() - started) / args.seeds * 1000
            failures += args.seeds - accepted
            print(f"{scheme:>6} {n:>4} {args.seeds:>5} {accepted:>8} "
                  f"{worst:>12.3e} {per_run:>8.2f}")
    print(f"\nfailures: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
