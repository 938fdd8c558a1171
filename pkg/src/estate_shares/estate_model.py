"""Domain types, validation and exact-rational helpers.

Every numeric quantity is a :class:`fractions.Fraction` (aliased ``Ratio``).
Counts of children are plain ints. Nothing here touches floating point.
"""

from __future__ import annotations

import enum
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

Ratio = Fraction

_RATIO_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


# -- errors -----------------------------------------------------------------


class EstateError(Exception):
    """Base class for everything this package raises on purpose."""


class ValidationError(EstateError, ValueError):
    """Bad input. ``field`` names the offending location, e.g. ``mistresses[1].fraction``."""

    def __init__(self, message: str, field: str | None = None) -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ZeroLegitimate(ValidationError):
    pass


class NegativeCount(ValidationError):
    pass


class FractionOutOfRange(ValidationError):
    pass


class MalformedRatio(ValidationError):
    pass


class PreconditionError(EstateError):
    """Input is valid but the requested operation is not defined on it."""


class NoIllegitimateChild(PreconditionError):
    pass


class ZeroFraction(PreconditionError):
    pass


class LastLegitimateChild(PreconditionError):
    pass


class TooLargeForOracle(PreconditionError):
    pass


class MethodNotApplicable(PreconditionError):
    pass


class ConservationViolation(EstateError):
    """Shares did not sum to the whole estate. Always a bug, never bad input."""


# -- ratio text form --------------------------------------------------------


def parse_ratio(text: Any, field: str | None = None) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (also accepts int / Fraction values as-is)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedRatio(f"expected a 'p/q' string, got {type(text).__name__}", field)
    m = _RATIO_RE.match(text.strip())
    if m is None:
        raise MalformedRatio(f"cannot parse {text!r} as 'p/q'", field)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise MalformedRatio(f"zero denominator in {text!r}", field)
    return Fraction(num, den)


def format_ratio(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, digits: int) -> str:
    """Render with ``digits`` fractional digits, rounding half to even."""
    if digits < 0:
        raise ValueError("digits must be >= 0")
    scaled = round(value * 10**digits)  # Fraction.__round__ is half-even
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


# -- operation counting -----------------------------------------------------


@dataclass
class OpCount:
    """Tally of Ratio operations. Subtraction counts as an addition.

    Multiplying a Ratio by an integer coefficient counts as a multiplication.
    ``terms`` is bumped by summation routines, once per summand.
    """

    additions: int = 0
    multiplications: int = 0
    divisions: int = 0
    terms: int = 0

    def add(self, a, b) -> Fraction:
        self.additions += 1
        return a + b

    def sub(self, a, b) -> Fraction:
        self.additions += 1
        return a - b

    def mul(self, a, b) -> Fraction:
        self.multiplications += 1
        return a * b

    def div(self, a, b) -> Fraction:
        self.divisions += 1
        return Fraction(a) / b

    @property
    def total(self) -> int:
        return self.additions + self.multiplications + self.divisions

    def reset(self) -> None:
        self.additions = self.multiplications = self.divisions = self.terms = 0

    def snapshot(self) -> tuple[int, int, int]:
        return (self.additions, self.multiplications, self.divisions)


# -- composition types ------------------------------------------------------


class Method(str, enum.Enum):
    NAIVE = "naive"
    SERIES = "series"
    BACKWARD = "backward"
    CLOSED_FORM = "closed-form"
    INCREMENTAL = "incremental"
    MULTISUM = "multisum"
    RECURSIVE = "recursive"
    ORACLE = "oracle"

    @property
    def single_line_only(self) -> bool:
        return self in _SINGLE_LINE_METHODS


_SINGLE_LINE_METHODS = frozenset(
    {Method.SERIES, Method.BACKWARD, Method.CLOSED_FORM, Method.INCREMENTAL}
)


def _check_count(value: Any, field: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"expected an integer, got {value!r}", field)
    if value < minimum:
        if minimum == 1:
            raise ZeroLegitimate("at least one legitimate child is required", field)
        raise NegativeCount(f"count must be >= {minimum}, got {value}", field)
    return value


def _check_fraction(value: Any, field: str) -> Fraction:
    x = parse_ratio(value, field)
    if not 0 <= x <= 1:
        raise FractionOutOfRange(f"fraction must lie in [0, 1], got {format_ratio(x)}", field)
    return x


@dataclass(frozen=True)
class Mistress:
    children: int
    fraction: Fraction

    def __post_init__(self) -> None:
        _check_count(self.children, "children")
        object.__setattr__(self, "fraction", _check_fraction(self.fraction, "fraction"))


@dataclass(frozen=True)
class SingleLine:
    legitimate: int
    illegitimate: int
    fraction: Fraction

    def __post_init__(self) -> None:
        _check_count(self.legitimate, "legitimate", minimum=1)
        _check_count(self.illegitimate, "illegitimate")
        object.__setattr__(self, "fraction", _check_fraction(self.fraction, "fraction"))

    def family(self) -> FamilyComposition:
        return FamilyComposition(self.legitimate, (Mistress(self.illegitimate, self.fraction),))


@dataclass(frozen=True)
class FamilyComposition:
    legitimate: int
    mistresses: tuple[Mistress, ...] = ()

    def __post_init__(self) -> None:
        _check_count(self.legitimate, "legitimate", minimum=1)
        object.__setattr__(self, "mistresses", tuple(self.mistresses))

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(m.children for m in self.mistresses)

    @property
    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(m.fraction for m in self.mistresses)

    @property
    def total_children(self) -> int:
        return self.legitimate + sum(self.counts)

    def single_line(self) -> SingleLine:
        """View as a single line. An empty mistress list becomes ``n = 0``."""
        if len(self.mistresses) > 1:
            raise MethodNotApplicable(
                f"single-line method needs at most one mistress, got {len(self.mistresses)}"
            )
        if not self.mistresses:
            return SingleLine(self.legitimate, 0, Fraction(0))
        m = self.mistresses[0]
        return SingleLine(self.legitimate, m.children, m.fraction)

    def with_counts(self, legitimate: int, counts: Sequence[int]) -> FamilyComposition:
        return FamilyComposition(
            legitimate,
            tuple(Mistress(n, m.fraction) for n, m in zip(counts, self.mistresses)),
        )

    def to_json(self) -> dict:
        return {
            "legitimate": self.legitimate,
            "mistresses": [
                {"children": m.children, "fraction": format_ratio(m.fraction)}
                for m in self.mistresses
            ],
        }


@dataclass(frozen=True)
class ShareBreakdown:
    """Per-class shares. ``illegitimate_shares[i]`` is None when mistress i has no children."""

    legitimate: int
    counts: tuple[int, ...]
    legitimate_share: Fraction
    illegitimate_shares: tuple[Fraction | None, ...]
    total_distributed: Fraction = field(init=False)

    def __post_init__(self) -> None:
        total = self.legitimate * self.legitimate_share
        for n, share in zip(self.counts, self.illegitimate_shares):
            if n:
                total += n * share
        object.__setattr__(self, "total_distributed", total)

    @property
    def per_class_totals(self) -> tuple[Fraction, tuple[Fraction, ...]]:
        return (
            self.legitimate * self.legitimate_share,
            tuple(
                n * s if s is not None else Fraction(0)
                for n, s in zip(self.counts, self.illegitimate_shares)
            ),
        )


# -- validation -------------------------------------------------------------


def validate(raw: Mapping[str, Any] | FamilyComposition) -> FamilyComposition:
    """Turn a candidate (usually parsed JSON) into a FamilyComposition.

    Raises a :class:`ValidationError` subclass whose ``field`` points at the
    first offending entry.
    """
    if isinstance(raw, FamilyComposition):
        return raw
    if not isinstance(raw, Mapping):
        raise ValidationError("estate must be an object")
    if "legitimate" not in raw:
        raise ValidationError("missing", "legitimate")
    legit = _check_count(raw["legitimate"], "legitimate", minimum=1)
    entries = raw.get("mistresses", [])
    if not isinstance(entries, Sequence) or isinstance(entries, (str, bytes)):
        raise ValidationError("expected a list", "mistresses")
    mistresses = []
    for i, entry in enumerate(entries):
        where = f"mistresses[{i}]"
        if not isinstance(entry, Mapping):
            raise ValidationError("expected an object", where)
        for key in ("children", "fraction"):
            if key not in entry:
                raise ValidationError("missing", f"{where}.{key}")
        n = _check_count(entry["children"], f"{where}.children")
        x = _check_fraction(entry["fraction"], f"{where}.fraction")
        mistresses.append(Mistress(n, x))
    return FamilyComposition(legit, tuple(mistresses))
