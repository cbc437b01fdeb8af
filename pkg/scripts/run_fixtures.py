#!/usr/bin/env python3
"""Run every built-in fixture through the full battery and print a summary.

Usage: python scripts/run_fixtures.py [--chain N]
"""

import argparse

from gluecheck.finset import FAMILY_FIXTURES, dualize, duality_check, fixture_gluing, glue
from gluecheck.multipullback import (
    RepairRefused,
    build_pullback,
    check_cocycle,
    check_condition2,
    check_condition3,
    projection_surjective,
    repair,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--chain", type=int, default=3, help="chain length for the interval pieces")
    args = parser.parse_args()

    header = f"{'fixture':10} {'dim':>4} {'classes':>7} {'proj':>5} {'cocycle':>8} {'ext3':>5} {'ext2':>5} {'duality':>8} {'repair':>22}"
    print(header)
    print("-" * len(header))
    for name in sorted(FAMILY_FIXTURES):
        gluing = fixture_gluing(name, args.chain)
        family = dualize(gluing)
        pullback = build_pullback(family)
        projections_ok = all(projection_surjective(pullback, i)[0] for i in pullback.over)
        cocycle = check_cocycle(family)
        ext3 = check_condition3(family)
        ext2 = check_condition2(family)
        dual = duality_check(gluing)
        try:
            repaired = repair(family)
            repair_note = "overlaps " + ",".join(
                str(repaired.family.overlaps[k].dim) for k in sorted(repaired.family.overlaps)
            )
        except RepairRefused as e:
            repair_note = f"refused ({e.projection})"
        print(
            f"{name:10} {pullback.dim:>4} {glue(gluing).size:>7} "
            f"{'yes' if projections_ok else 'no':>5} "
            f"{'yes' if cocycle.overall else 'no':>8} "
            f"{'yes' if ext3.ok else 'no':>5} "
            f"{'yes' if ext2.ok else 'no':>5} "
            f"{'ok' if dual.ok else 'BUG':>8} "
            f"{repair_note:>22}"
        )


if __name__ == "__main__":
    main()
