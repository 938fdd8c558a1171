"""Cross-check every evaluator on a parameter grid and report timings.

    python scripts/grid_agreement.py --max-l 12 --max-n 12 --max-m 2 --max-ni 4
"""

import argparse
import sys
import time

from estate_shares import oracle
from estate_shares.cli import run_selfcheck


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-l", type=int, default=12)
    parser.add_argument("--max-n", type=int, default=12)
    parser.add_argument("--max-m", type=int, default=2)
    parser.add_argument("--max-ni", type=int, default=4)
    args = parser.parse_args()
    if args.max_n > oracle.MAX_CHILDREN or args.max_m * args.max_ni > oracle.MAX_CHILDREN:
        parser.error(f"oracle handles at most {oracle.MAX_CHILDREN} illegitimate children")

    start = time.perf_counter()
    stats, bad = run_selfcheck(args.max_l, args.max_n, args.max_m, args.max_ni)
    elapsed = time.perf_counter() - start
    print(f"single-line points: {stats['single']}")
    print(f"multi-mistress points: {stats['multi']}")
    print(f"exact comparisons: {stats['comparisons']}")
    print(f"elapsed: {elapsed:.1f}s")
    if bad is not None:
        print(f"divergence: {bad.describe()}")
        sys.exit(1)


if __name__ == "__main__":
    main()
