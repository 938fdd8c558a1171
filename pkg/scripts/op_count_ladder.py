"""Ratio-operation counts for series, backward iteration and a single
add_illegitimate step along a doubling ladder of n.

    python scripts/op_count_ladder.py --n-max 4096 --out ops.csv

Prints the CSV (or writes it to --out) followed by a per-method growth summary
on stderr: ops per unit n for the linear paths, the flat count for the update.
"""

import argparse
import csv
import sys
from collections import defaultdict
from fractions import Fraction

from estate_shares.cli import BENCH_MAX_N, bench_rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=1024)
    parser.add_argument("--legit", type=int, default=2)
    parser.add_argument("--fraction", default="1/3")
    parser.add_argument("--out")
    args = parser.parse_args()
    if not 0 <= args.n_max <= BENCH_MAX_N:
        parser.error(f"--n-max must be in [0, {BENCH_MAX_N}]")

    rows = list(bench_rows(args.n_max, args.legit, Fraction(args.fraction)))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["n", "method", "adds", "muls", "divs"])
    writer.writerows(rows)
    if args.out:
        fh.close()

    by_method = defaultdict(dict)
    for n, method, *ops in rows:
        by_method[method][n] = sum(ops)
    for method, totals in by_method.items():
        ns = sorted(totals)
        if len(set(totals.values())) == 1:
            print(f"{method:>17}: constant, {totals[ns[0]]} ops", file=sys.stderr)
        else:
            slopes = {Fraction(totals[n] - totals[0], n) for n in ns if n}
            shape = "exactly linear" if len(slopes) == 1 else "non-linear"
            print(f"{method:>17}: {shape}, slope(s) {sorted(map(str, slopes))}", file=sys.stderr)


if __name__ == "__main__":
    main()
