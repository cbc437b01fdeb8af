#!/usr/bin/env python3
"""Scan random gluings for equivalence or duality violations.

The three verdicts (cocycle, subset extension, pairwise extension) are
provably equivalent for the surjective distributive families this corpus
produces, and the pullback dimension must count glued classes; any
violation printed here is a bug in the tool, not a mathematical finding.

Usage: python scripts/run_corpus.py [--count N] [--seed N]
                                    [--max-pieces N] [--max-points N]
"""

import argparse
import time
from collections import Counter

from gluecheck.finset import duality_check, dualize, random_gluing
from gluecheck.multipullback import check_theorem_equivalence


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0, help="first seed of the scan")
    parser.add_argument("--max-pieces", type=int, default=6)
    parser.add_argument("--max-points", type=int, default=12)
    args = parser.parse_args()

    verdict_counts: Counter = Counter()
    bad = []
    start = time.perf_counter()
    for seed in range(args.seed, args.seed + args.count):
        gluing = random_gluing(seed, max_pieces=args.max_pieces, max_points=args.max_points)
        family = dualize(gluing)
        equivalence = check_theorem_equivalence(family)
        verdict_counts[equivalence.verdicts[0]] += 1
        if not equivalence.consistent:
            bad.append((seed, "equivalence", equivalence.verdicts))
        duality = duality_check(gluing)
        if not duality.ok:
            bad.append((seed, "duality", duality.mismatches))
    elapsed = time.perf_counter() - start

    print(f"scanned {args.count} instances in {elapsed:.1f}s "
          f"(seeds {args.seed}..{args.seed + args.count - 1})")
    print(f"cocycle holds on {verdict_counts[True]} instances, "
          f"fails on {verdict_counts[False]}")
    if bad:
        print(f"{len(bad)} VIOLATIONS (tool bugs):")
        for seed, kind, detail in bad:
            print(f"  seed {seed}: {kind}: {detail}")
        raise SystemExit(1)
    print("no equivalence or duality violations")


if __name__ == "__main__":
    main()
