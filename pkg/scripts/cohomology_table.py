"""Cohomology of the Drinfeld complex, block by block, against wedge powers.

    python3 scripts/cohomology_table.py --algebra free:2 --cutoff 4 --max-arity 2
"""

import argparse

from drinfeld.cli import parse_algebra
from drinfeld.hkr import cohomology_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algebra", default="free:2")
    ap.add_argument("--cutoff", type=int, default=4)
    ap.add_argument("--max-arity", type=int, default=2)
    args = ap.parse_args()

    alg = parse_algebra(args.algebra, args.cutoff)
    print(f"{'degree':>6} {'weight':>6} {'dim H':>6} {'dim wedge':>9}")
    for row in cohomology_table(alg, args.max_arity, args.cutoff):
        mark = "" if row["dim"] == row["expected"] else "  MISMATCH"
        print(f"{row['degree']:>6} {row['weight']:>6} {row['dim']:>6} {row['expected']:>9}{mark}")


if __name__ == "__main__":
    main()
