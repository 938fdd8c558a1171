"""One class of illegitimate children: ``l`` legitimate, ``n`` illegitimate at fraction ``x``.

Every ``share_*`` function returns the legitimate share a(l, n). All of them
take an optional :class:`OpCount` that is charged for each Ratio operation.
"""

from __future__ import annotations

from fractions import Fraction

from .estate_model import (
    LastLegitimateChild,
    Method,
    NoIllegitimateChild,
    OpCount,
    ShareBreakdown,
    SingleLine,
    ZeroFraction,
)


def naive_share(s: SingleLine) -> Fraction:
    """Pooled model: illegitimate children get ``x`` of the *actual* legitimate share.

    Solves ``l*a + n*x*a = 1``. This is the wrong reading of the rule and only
    agrees with the others when ``n == 0`` or ``x`` is 0 or 1.
    """
    return Fraction(1) / (s.legitimate + s.illegitimate * s.fraction)


def share_backward(s: SingleLine, count: OpCount | None = None) -> Fraction:
    """Walk the family from all-legitimate ``(l+n, 0)`` back to ``(l, n)``.

    Exactly ``n`` steps of ``a(l+k, n-k) = (1 - (n-k)*x*a(l+k+1, n-k-1)) / (l+k)``.
    """
    c = count if count is not None else OpCount()
    l, n, x = s.legitimate, s.illegitimate, s.fraction
    a = c.div(1, l + n)
    for k in range(n - 1, -1, -1):
        handed_out = c.mul(c.mul(x, n - k), a)
        a = c.div(c.sub(1, handed_out), l + k)
    return a


def share_series(s: SingleLine, count: OpCount | None = None) -> Fraction:
    """Alternating sum  sum_r (-x)^r n!/(n-r)! / (l(l+1)...(l+r))."""
    c = count if count is not None else OpCount()
    l, n, x = s.legitimate, s.illegitimate, s.fraction
    term = c.div(1, l)
    total = term
    c.terms += 1
    neg_x = -x
    for r in range(1, n + 1):
        term = c.div(c.mul(term, c.mul(neg_x, n - r + 1)), l + r)
        total = c.add(total, term)
        c.terms += 1
    return total


def share_closed_form(s: SingleLine, count: OpCount | None = None) -> Fraction:
    """Factorial form  n!(1-x)^n/(n+l)! * sum_b (l+b-1)!/b! * (1-x)^-b.

    At ``x == 1`` the prefactor vanishes and the ratio blows up; the limit is
    ``1/(l+n)`` and is returned directly.
    """
    c = count if count is not None else OpCount()
    l, n, x = s.legitimate, s.illegitimate, s.fraction
    if x == 1:
        return c.div(1, l + n)
    keep = c.sub(1, x)
    inv_keep = c.div(1, keep)
    # term_b = (l+b-1)!/b! * keep^-b, built up from term_0 = (l-1)!
    term = Fraction(1)
    for j in range(1, l):
        term = c.mul(term, j)
    total = term
    c.terms += 1
    for b in range(1, n + 1):
        term = c.div(c.mul(c.mul(term, inv_keep), l + b - 1), b)
        total = c.add(total, term)
        c.terms += 1
    # prefactor n! keep^n / (n+l)! = prod_{k=1..n} k*keep/(l+k)  /  l!
    pre = Fraction(1)
    for k in range(1, n + 1):
        pre = c.div(c.mul(c.mul(pre, keep), k), l + k)
    for j in range(1, l + 1):
        pre = c.div(pre, j)
    return c.mul(pre, total)


def add_illegitimate(a: Fraction, s: SingleLine, count: OpCount | None = None) -> Fraction:
    """Given ``a = a(l, n)``, return ``a(l, n+1)`` in a fixed number of operations.

    ``a(l, n+1) = 1/(l+n+1) + (1-x)(n+1)/(l+n+1) * a(l, n)``.
    """
    c = count if count is not None else OpCount()
    l, n, x = s.legitimate, s.illegitimate, s.fraction
    size = l + n + 1
    coeff = c.div(c.mul(c.sub(1, x), n + 1), size)
    return c.add(c.div(1, size), c.mul(coeff, a))


def share_incremental(s: SingleLine, count: OpCount | None = None) -> Fraction:
    """Start from ``1/l`` and announce the illegitimate children one at a time."""
    c = count if count is not None else OpCount()
    a = c.div(1, s.legitimate)
    for k in range(s.illegitimate):
        a = add_illegitimate(a, SingleLine(s.legitimate, k, s.fraction), c)
    return a


def legitimize(a: Fraction, s: SingleLine, count: OpCount | None = None) -> Fraction:
    """Given ``a = a(l, n)``, return ``a(l+1, n-1)``."""
    c = count if count is not None else OpCount()
    l, n, x = s.legitimate, s.illegitimate, s.fraction
    if n == 0:
        raise NoIllegitimateChild("no illegitimate child to legitimize")
    if x == 0:
        raise ZeroFraction("x = 0 loses the counterfactual share; recompute instead")
    return c.div(c.sub(1, c.mul(a, l)), c.mul(x, n))


def delegitimize(a: Fraction, s: SingleLine, count: OpCount | None = None) -> Fraction:
    """Given ``a = a(l, n)``, return ``a(l-1, n+1)``."""
    c = count if count is not None else OpCount()
    l, n, x = s.legitimate, s.illegitimate, s.fraction
    if l == 1:
        raise LastLegitimateChild("cannot remove the last legitimate child")
    return c.div(c.sub(1, c.mul(c.mul(x, n + 1), a)), l - 1)


_EVALUATORS = {
    Method.SERIES: share_series,
    Method.BACKWARD: share_backward,
    Method.CLOSED_FORM: share_closed_form,
    Method.INCREMENTAL: share_incremental,
}


def share(s: SingleLine, method: Method, count: OpCount | None = None) -> Fraction:
    if method is Method.NAIVE:
        return naive_share(s)
    if method in _EVALUATORS:
        return _EVALUATORS[method](s, count)
    # multi-line evaluators handle m = 1 as a special case
    from .multi_mistress import legitimate_share

    return legitimate_share(s.family(), method, count)


def illegitimate_share(s: SingleLine, method: Method = Method.BACKWARD) -> Fraction:
    """What each illegitimate child receives.

    Under the real rule this is ``x * a(l+1, n-1)``. Under the naive model it
    is ``x`` times the actual legitimate share.
    """
    if s.illegitimate == 0:
        raise NoIllegitimateChild("family has no illegitimate children")
    if method is Method.NAIVE:
        return s.fraction * naive_share(s)
    promoted = SingleLine(s.legitimate + 1, s.illegitimate - 1, s.fraction)
    return s.fraction * share(promoted, method)


def breakdown_from_share(s: SingleLine, a: Fraction) -> ShareBreakdown:
    """Complete a breakdown from a known legitimate share using conservation.

    The illegitimate share is ``(1 - l*a) / n``; O(1), used by what-if edits.
    """
    if s.illegitimate == 0:
        return ShareBreakdown(s.legitimate, (0,), a, (None,))
    other = (1 - s.legitimate * a) / s.illegitimate
    return ShareBreakdown(s.legitimate, (s.illegitimate,), a, (other,))

