"""Ground-truth evaluator: the inheritance rule as a plain recursion.

Each legitimate child gets ``a``; each child of mistress i gets ``x_i`` times
what a legitimate child would get if that one child were legitimate. The
whole estate is handed out, so

    l * a(l; n) + sum_i n_i * x_i * a(l + 1; n - e_i) = 1,   a(l; 0) = 1/l.

Deliberately unmemoized and free of algebra. Must not import the other
evaluators.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .estate_model import FamilyComposition, TooLargeForOracle

MAX_CHILDREN = 16
# Orderings in which the illegitimate children can be legitimized; bounds the
# number of leaves of the call tree.
MAX_ORDERINGS = 2_000_000


def _orderings(counts) -> int:
    total = factorial(sum(counts))
    for n in counts:
        total //= factorial(n)
    return total


def check_guard(f: FamilyComposition) -> None:
    if sum(f.counts) > MAX_CHILDREN:
        raise TooLargeForOracle(
            f"oracle limited to {MAX_CHILDREN} illegitimate children, got {sum(f.counts)}"
        )
    if _orderings(f.counts) > MAX_ORDERINGS:
        raise TooLargeForOracle(f"oracle call tree too wide for counts {f.counts}")


def _share(legitimate: int, counts: list[int], fractions: list[Fraction]) -> Fraction:
    handed_out = Fraction(0)
    for i, n in enumerate(counts):
        if n == 0:
            continue
        counts[i] -= 1
        handed_out += n * fractions[i] * _share(legitimate + 1, counts, fractions)
        counts[i] += 1
    return (1 - handed_out) / legitimate


def oracle_share(f: FamilyComposition) -> Fraction:
    check_guard(f)
    return _share(f.legitimate, list(f.counts), list(f.fractions))
