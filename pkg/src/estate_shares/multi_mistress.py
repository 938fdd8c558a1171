"""Several classes of illegitimate children, one per mistress, each at its own fraction."""

from __future__ import annotations

from fractions import Fraction

from . import single_line
from .estate_model import (
    ConservationViolation,
    FamilyComposition,
    Method,
    OpCount,
    ShareBreakdown,
    format_ratio,
)
from .oracle import oracle_share


def share_multisum(f: FamilyComposition, count: OpCount | None = None) -> Fraction:
    """Nested sum over r_1..r_m of  prod (-x_j)^r_j C(n_j, r_j) / ((1+R) C(l+R, l-1)),  R = sum r.

    Binomial weights and the R-dependent denominator are both carried by
    ratio updates, so no factorials are formed. Evaluates exactly
    prod(n_i + 1) summands.
    """
    c = count if count is not None else OpCount()
    l = f.legitimate
    counts, fracs = f.counts, f.fractions
    # tail[R] = 1/((1+R) C(l+R, l-1));  tail[R+1] = tail[R] * (R+1)/(l+R+1)
    tail = [c.div(1, l)]
    for r in range(sum(counts)):
        tail.append(c.div(c.mul(tail[-1], r + 1), l + r + 1))

    def walk(j: int, weight: Fraction, depth: int) -> Fraction:
        if j == len(counts):
            c.terms += 1
            return c.mul(weight, tail[depth])
        n, neg_x = counts[j], -fracs[j]
        acc = Fraction(0)
        for r in range(n + 1):
            acc = c.add(acc, walk(j + 1, weight, depth + r))
            if r < n:
                # C(n, r+1) = C(n, r) * (n-r)/(r+1)
                weight = c.div(c.mul(c.mul(weight, neg_x), n - r), r + 1)
        return acc

    return walk(0, Fraction(1), 0)


def share_recursive(
    f: FamilyComposition,
    count: OpCount | None = None,
    memo: dict[tuple[int, ...], Fraction] | None = None,
) -> Fraction:
    """Memoized ``l*a(l; n) + sum_i n_i x_i a(l+1; n - e_i) = 1``.

    The memo is keyed by the remaining counts alone; the legitimate count at a
    state is ``l`` plus the number of children already promoted. Pass an empty
    dict as ``memo`` to inspect the visited states afterwards; it must not be
    reused across different families.
    """
    c = count if count is not None else OpCount()
    fracs = f.fractions
    top = sum(f.counts)
    if memo is None:
        memo = {}

    def a(remaining: tuple[int, ...]) -> Fraction:
        if remaining in memo:
            return memo[remaining]
        legit = f.legitimate + top - sum(remaining)
        handed_out = Fraction(0)
        for i, n in enumerate(remaining):
            if n == 0:
                continue
            child = remaining[:i] + (n - 1,) + remaining[i + 1 :]
            handed_out = c.add(handed_out, c.mul(c.mul(fracs[i], n), a(child)))
        value = c.div(c.sub(1, handed_out), legit)
        memo[remaining] = value
        return value

    return a(f.counts)


def legitimate_share(f: FamilyComposition, method: Method, count: OpCount | None = None) -> Fraction:
    """Legitimate share of ``f`` by any method. Single-line methods need at most one mistress."""
    method = Method(method)
    if method is Method.MULTISUM:
        return share_multisum(f, count)
    if method is Method.RECURSIVE:
        return share_recursive(f, count)
    if method is Method.ORACLE:
        return oracle_share(f)
    if method is Method.NAIVE:
        return Fraction(1) / (f.legitimate + sum(n * x for n, x in zip(f.counts, f.fractions)))
    return single_line.share(f.single_line(), method, count)


def breakdown(f: FamilyComposition, method: Method = Method.RECURSIVE) -> ShareBreakdown:
    """Legitimate share plus one per-child share per mistress.

    A mistress with no children gets ``None``. Each illegitimate child of
    mistress i receives ``x_i * a(l+1; n - e_i)``; under the naive model it is
    ``x_i * a`` instead. Raises ConservationViolation if the shares do not add
    up to exactly 1.
    """
    method = Method(method)
    memo: dict[tuple[int, ...], Fraction] = {}
    if method is Method.RECURSIVE:
        # the promoted families are the root's children in the memo
        a = share_recursive(f, memo=memo)
    else:
        a = legitimate_share(f, method)
    shares: list[Fraction | None] = []
    for i, (n, x) in enumerate(zip(f.counts, f.fractions)):
        if n == 0:
            shares.append(None)
        elif method is Method.NAIVE:
            shares.append(x * a)
        else:
            promoted = list(f.counts)
            promoted[i] -= 1
            if method is Method.RECURSIVE:
                other = memo[tuple(promoted)]
            else:
                other = legitimate_share(f.with_counts(f.legitimate + 1, promoted), method)
            shares.append(x * other)
    result = ShareBreakdown(f.legitimate, f.counts, a, tuple(shares))
    if result.total_distributed != 1:
        raise ConservationViolation(
            f"{method.value} distributed {format_ratio(result.total_distributed)} for {f}"
        )
    return result
