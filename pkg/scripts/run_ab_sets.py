#!/usr/bin/env python3
"""Verify the distinguished element sets for every classical family up to a rank."""

import argparse
import sys
import time

from liegen.invgen import verify_all_ab


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-rank", type=int, default=30)
    args = parser.parse_args(argv)
    start = time.perf_counter()
    reports = verify_all_ab(args.max_rank)
    ok = True
    for r in reports:
        good = r.empty and r.proper_subsets_nonempty
        ok &= good
        smallest = min((s.mass for s in r.subset_residuals if len(s.labels) < len(r.elements)),
                       default=None)
        print(f"{str(r.family):14s} elements={len(r.elements)} empty={r.empty} "
              f"subsets_nonempty={r.proper_subsets_nonempty} min_subset_mass={smallest}")
    print(f"{len(reports)} families, all ok: {ok}, {time.perf_counter() - start:.1f} s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
