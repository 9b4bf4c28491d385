#!/usr/bin/env python3
"""Sample GL_n(q) or SL_n(q) and compare torus-type frequencies with 1/z_lambda."""

import argparse
import sys

from liegen.ffmc import compare_to_weyl, torus_statistics


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--group", choices=["GL", "SL"], default="GL")
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--q", type=int, nargs="+", default=[101], help="one or more primes")
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args(argv)
    flagged = False
    for q in args.q:
        rep = torus_statistics(args.group, args.n, q, args.samples, args.seed,
                               streams=args.workers, workers=args.workers)
        print(f"{args.group}_{args.n}({q}): {rep.samples} samples, "
              f"non-regular fraction {float(rep.non_regular_fraction):.5f}")
        for d in compare_to_weyl(rep):
            flagged |= d.flagged
            lam = ",".join(map(str, d.partition))
            print(f"  {lam:12s} freq={float(d.frequency):.5f} exact={d.exact} "
                  f"dev={float(d.deviation):+.5f} flagged={d.flagged}")
    return 1 if flagged else 0


if __name__ == "__main__":
    sys.exit(main())
