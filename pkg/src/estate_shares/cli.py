"""Command-line front end.

Exit codes: 0 ok, 1 self-check found a divergence, 2 bad input,
3 operation precondition failed, 4 internal conservation failure.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import multi_mistress, oracle, single_line
from .estate_model import (
    ConservationViolation,
    FamilyComposition,
    LastLegitimateChild,
    Method,
    Mistress,
    NoIllegitimateChild,
    OpCount,
    PreconditionError,
    ShareBreakdown,
    SingleLine,
    TooLargeForOracle,
    ValidationError,
    format_decimal,
    format_ratio,
    parse_ratio,
    validate,
)

EXIT_OK = 0
EXIT_SELFCHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4

BENCH_MAX_N = 10_000
SINGLE_GRID_FRACTIONS = (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(2, 5), Fraction(1))
MULTI_GRID_FRACTIONS = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1))


class InputError(Exception):
    pass


# -- rendering --------------------------------------------------------------


@dataclass(frozen=True)
class OutputMode:
    kind: str = "exact"  # exact | decimal | json
    digits: int = 6

    def num(self, value: Fraction | None) -> str | None:
        if value is None:
            return None
        if self.kind == "decimal":
            return format_decimal(value, self.digits)
        return format_ratio(value)


def breakdown_json(b: ShareBreakdown, method: Method) -> dict:
    legit_total, class_totals = b.per_class_totals
    ratio = lambda v: None if v is None else format_ratio(v)  # noqa: E731
    return {
        "legitimate_share": ratio(b.legitimate_share),
        "illegitimate_shares": [ratio(s) for s in b.illegitimate_shares],
        "per_class_totals": {
            "legitimate": ratio(legit_total),
            "illegitimate": [ratio(t) for t in class_totals],
        },
        "total": ratio(b.total_distributed),
        "method": method.value,
    }


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def breakdown_lines(
    f: FamilyComposition, b: ShareBreakdown, method: Method, out: OutputMode
) -> list[str]:
    legit_total, class_totals = b.per_class_totals
    head = f"legitimate: {out.num(b.legitimate_share)}"
    if method is Method.NAIVE:
        head += " (WARNING: naive model)"
    lines = [head, f"  children: {f.legitimate}, class total: {out.num(legit_total)}"]
    for i, (m, share, total) in enumerate(zip(f.mistresses, b.illegitimate_shares, class_totals), 1):
        lines.append(f"mistress {i}: {out.num(share) if share is not None else '-'}")
        lines.append(
            f"  children: {m.children}, fraction: {format_ratio(m.fraction)}, "
            f"class total: {out.num(total)}"
        )
    lines.append(f"total: {out.num(b.total_distributed)}")
    lines.append(f"method: {method.value}")
    return lines


# -- estate input -----------------------------------------------------------


def parse_mistress_flag(text: str, position: int) -> dict:
    field = f"--mistress[{position}]"
    children, sep, fraction = text.partition(":")
    if not sep:
        raise ValidationError(f"expected 'n:p/q', got {text!r}", field)
    try:
        n = int(children)
    except ValueError:
        raise ValidationError(f"bad child count {children!r}", field) from None
    return {"children": n, "fraction": parse_ratio(fraction, f"{field}.fraction")}


def load_estate(args: argparse.Namespace) -> FamilyComposition:
    raw: dict = {}
    if args.spec:
        try:
            with open(args.spec) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise InputError(f"--spec: cannot read {args.spec}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"--spec: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(raw, dict):
            raise ValidationError("estate must be a JSON object", "--spec")
    if args.legit is not None:
        raw["legitimate"] = args.legit
    if args.mistress:
        raw["mistresses"] = [parse_mistress_flag(t, i) for i, t in enumerate(args.mistress)]
    if "legitimate" not in raw:
        raise InputError("legitimate: give --legit or a --spec document")
    return validate(raw)


def output_mode(args: argparse.Namespace) -> OutputMode:
    if args.json:
        return OutputMode("json")
    if args.decimal is not None:
        if args.decimal < 0:
            raise InputError("--decimal: digits must be >= 0")
        return OutputMode("decimal", args.decimal)
    return OutputMode("exact")


# -- commands ---------------------------------------------------------------


def cmd_share(args: argparse.Namespace) -> int:
    f = load_estate(args)
    out = output_mode(args)
    method = Method(args.method)
    b = multi_mistress.breakdown(f, method)
    if out.kind == "json":
        sys.stdout.write(dump_json(breakdown_json(b, method)))
    else:
        print("\n".join(breakdown_lines(f, b, method, out)))
    return EXIT_OK


def apply_edit(f: FamilyComposition, edit: str, index: int) -> FamilyComposition:
    """The family after the edit; raises PreconditionError if the edit is impossible."""
    if not 1 <= index <= len(f.mistresses):
        raise PreconditionError(f"no mistress {index}; estate has {len(f.mistresses)}")
    counts = list(f.counts)
    i = index - 1
    if edit == "add-illegitimate":
        counts[i] += 1
        return f.with_counts(f.legitimate, counts)
    if edit == "legitimize":
        if counts[i] == 0:
            raise NoIllegitimateChild(f"mistress {index} has no children to legitimize")
        counts[i] -= 1
        return f.with_counts(f.legitimate + 1, counts)
    if edit == "delegitimize":
        if f.legitimate == 1:
            raise LastLegitimateChild("cannot delegitimize the last legitimate child")
        counts[i] += 1
        return f.with_counts(f.legitimate - 1, counts)
    raise InputError(f"unknown edit {edit!r}")


def whatif(f: FamilyComposition, edit: str, index: int, method: Method):
    """Return (before, after, path) where path is "incremental" or "recompute"."""
    before = multi_mistress.breakdown(f, method)
    after_family = apply_edit(f, edit, index)
    if len(f.mistresses) == 1 and method is not Method.NAIVE:
        s = f.single_line()
        a = before.legitimate_share
        new_a = None
        if edit == "add-illegitimate":
            new_a = single_line.add_illegitimate(a, s)
        elif edit == "legitimize" and s.fraction != 0:
            new_a = single_line.legitimize(a, s)
        elif edit == "delegitimize":
            new_a = single_line.delegitimize(a, s)
        if new_a is not None:
            after = single_line.breakdown_from_share(after_family.single_line(), new_a)
            if after.total_distributed != 1:
                raise ConservationViolation(f"incremental {edit} broke conservation")
            return before, after, "incremental"
    return before, multi_mistress.breakdown(after_family, method), "recompute"


def _delta(new: Fraction | None, old: Fraction | None) -> Fraction | None:
    if new is None or old is None:
        return None
    return new - old


def cmd_whatif(args: argparse.Namespace) -> int:
    f = load_estate(args)
    out = output_mode(args)
    method = Method(args.method)
    before, after, path = whatif(f, args.edit, args.index, method)
    after_family = apply_edit(f, args.edit, args.index)
    d_legit = after.legitimate_share - before.legitimate_share
    d_other = [_delta(n, o) for n, o in zip(after.illegitimate_shares, before.illegitimate_shares)]
    if out.kind == "json":
        fmt = lambda v: None if v is None else format_ratio(v)  # noqa: E731
        doc = {
            "edit": args.edit,
            "mistress": args.index,
            "path": path,
            "before": breakdown_json(before, method),
            "after": breakdown_json(after, method),
            "deltas": {
                "legitimate_share": fmt(d_legit),
                "illegitimate_shares": [fmt(d) for d in d_other],
            },
        }
        sys.stdout.write(dump_json(doc))
        return EXIT_OK
    print(f"edit: {args.edit} (mistress {args.index}), path: {path}")
    print(f"legitimate: {out.num(before.legitimate_share)} -> {out.num(after.legitimate_share)}")
    print("before:")
    print("\n".join("  " + line for line in breakdown_lines(f, before, method, out)))
    print("after:")
    print("\n".join("  " + line for line in breakdown_lines(after_family, after, method, out)))
    print("deltas:")
    print(f"  legitimate: {out.num(d_legit)}")
    for i, d in enumerate(d_other, 1):
        print(f"  mistress {i}: {out.num(d) if d is not None else '-'}")
    return EXIT_OK


# -- self-check -------------------------------------------------------------

SINGLE_METHODS = (
    Method.SERIES,
    Method.BACKWARD,
    Method.CLOSED_FORM,
    Method.INCREMENTAL,
    Method.MULTISUM,
    Method.RECURSIVE,
    Method.ORACLE,
)
MULTI_METHODS = (Method.MULTISUM, Method.RECURSIVE, Method.ORACLE)


@dataclass
class Divergence:
    family: FamilyComposition
    what: str
    left: tuple[str, Fraction]
    right: tuple[str, Fraction]

    def describe(self) -> str:
        f = self.family
        parts = ", ".join(f"({m.children}, {format_ratio(m.fraction)})" for m in f.mistresses)
        return (
            f"{self.what} at l={f.legitimate} [{parts}]: "
            f"{self.left[0]}={format_ratio(self.left[1])} vs {self.right[0]}={format_ratio(self.right[1])}"
        )


def single_grid(max_l: int, max_n: int):
    for l in range(1, max_l + 1):
        for n in range(max_n + 1):
            for x in SINGLE_GRID_FRACTIONS:
                yield SingleLine(l, n, x)


def multi_grid(max_l: int, max_m: int, max_ni: int, fractions=MULTI_GRID_FRACTIONS):
    for l in range(1, max_l + 1):
        for m in range(max_m + 1):
            for counts in itertools.product(range(max_ni + 1), repeat=m):
                for xs in itertools.product(fractions, repeat=m):
                    yield FamilyComposition(l, tuple(Mistress(n, x) for n, x in zip(counts, xs)))


def run_selfcheck(
    max_l: int,
    max_n: int,
    max_m: int,
    max_ni: int,
    share: Callable[[FamilyComposition, Method], Fraction] | None = None,
) -> tuple[dict[str, int], Divergence | None]:
    """Compare every method on both grids and check conservation.

    Stops at the first divergence. ``share`` defaults to
    :func:`multi_mistress.legitimate_share`.
    """
    if share is None:
        share = multi_mistress.legitimate_share
    stats = {"single": 0, "multi": 0, "comparisons": 0}
    for s in single_grid(max_l, max_n):
        f = s.family()
        values = [(m.value, share(f, m)) for m in SINGLE_METHODS]
        for name, v in values[1:]:
            stats["comparisons"] += 1
            if v != values[0][1]:
                return stats, Divergence(f, "methods disagree", values[0], (name, v))
        a = values[0][1]
        if s.illegitimate:
            promoted = FamilyComposition(s.legitimate + 1, (Mistress(s.illegitimate - 1, s.fraction),))
            other = share(promoted, Method.SERIES)
            total = s.legitimate * a + s.illegitimate * s.fraction * other
        else:
            total = s.legitimate * a
        if total != 1:
            return stats, Divergence(f, "conservation fails", ("total", total), ("expected", Fraction(1)))
        stats["single"] += 1
    for f in multi_grid(max_l, max_m, max_ni):
        values = [(m.value, share(f, m)) for m in MULTI_METHODS]
        for name, v in values[1:]:
            stats["comparisons"] += 1
            if v != values[0][1]:
                return stats, Divergence(f, "methods disagree", values[0], (name, v))
        total = f.legitimate * values[0][1]
        for i, (n, x) in enumerate(zip(f.counts, f.fractions)):
            if n:
                promoted = list(f.counts)
                promoted[i] -= 1
                total += n * x * share(f.with_counts(f.legitimate + 1, promoted), Method.MULTISUM)
        if total != 1:
            return stats, Divergence(f, "conservation fails", ("total", total), ("expected", Fraction(1)))
        stats["multi"] += 1
    return stats, None


def cmd_selfcheck(args: argparse.Namespace) -> int:
    for name in ("max_l", "max_n", "max_m", "max_ni"):
        if getattr(args, name) < (1 if name == "max_l" else 0):
            raise InputError(f"--{name.replace('_', '-')}: out of range")
    largest = [
        FamilyComposition(args.max_l, (Mistress(args.max_n, Fraction(1, 3)),)),
        FamilyComposition(args.max_l, tuple(Mistress(args.max_ni, Fraction(1, 3)) for _ in range(args.max_m))),
    ]
    try:
        for f in largest:
            oracle.check_guard(f)
    except TooLargeForOracle as exc:
        print(f"oracle guard refused: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stats, bad = run_selfcheck(args.max_l, args.max_n, args.max_m, args.max_ni)
    if bad is not None:
        print(f"FAIL: {bad.describe()}")
        return EXIT_SELFCHECK_FAILED
    print(
        f"PASS: {len(SINGLE_METHODS)} methods x {stats['single']} single-line points and "
        f"{len(MULTI_METHODS)} methods x {stats['multi']} multi-mistress points agree "
        f"({stats['comparisons']} exact comparisons); conservation exact"
    )
    return EXIT_OK


# -- bench ------------------------------------------------------------------


def ladder(n_max: int) -> list[int]:
    ns = [0]
    k = 1
    while k < n_max:
        ns.append(k)
        k *= 2
    if n_max > 0:
        ns.append(n_max)
    return ns


def bench_rows(n_max: int, legitimate: int = 2, fraction: Fraction = Fraction(1, 3)):
    """Yield (n, method, adds, muls, divs) for each rung of the ladder."""
    for n in ladder(n_max):
        s = SingleLine(legitimate, n, fraction)
        for name, run in (
            ("series", lambda c: single_line.share_series(s, c)),
            ("backward", lambda c: single_line.share_backward(s, c)),
        ):
            c = OpCount()
            run(c)
            yield (n, name, *c.snapshot())
        a = single_line.share_backward(s)
        c = OpCount()
        single_line.add_illegitimate(a, s, c)
        yield (n, "add_illegitimate", *c.snapshot())


def cmd_bench(args: argparse.Namespace) -> int:
    if not 0 <= args.n_max <= BENCH_MAX_N:
        raise InputError(f"--n-max: must be in [0, {BENCH_MAX_N}]")
    fraction = parse_ratio(args.fraction, "--fraction")
    s = SingleLine(args.legit, 0, fraction)  # validates
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "method", "adds", "muls", "divs"])
    for row in bench_rows(args.n_max, s.legitimate, s.fraction):
        writer.writerow(row)
    return EXIT_OK


# -- entry point ------------------------------------------------------------


def _add_estate_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="estate JSON document")
    p.add_argument("--legit", type=int, help="number of legitimate children")
    p.add_argument(
        "--mistress",
        action="append",
        metavar="N:P/Q",
        help="N children at inheritance fraction P/Q (repeatable; replaces the document's list)",
    )
    p.add_argument(
        "--method",
        default=Method.RECURSIVE.value,
        choices=[m.value for m in Method],
    )
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="print lowest-terms p/q (default)")
    mode.add_argument("--decimal", type=int, metavar="DIGITS", help="print rounded half-even")
    mode.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="estate-shares", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("share", help="shares for an estate")
    _add_estate_args(p)
    p.set_defaults(func=cmd_share)

    p = sub.add_parser("whatif", help="effect of one change to the family")
    p.add_argument("edit", choices=["add-illegitimate", "legitimize", "delegitimize"])
    p.add_argument("index", nargs="?", type=int, default=1, help="mistress number, from 1")
    _add_estate_args(p)
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("selfcheck", help="cross-check every method on a grid")
    p.add_argument("--max-l", type=int, default=6)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--max-ni", type=int, default=2)
    p.set_defaults(func=cmd_selfcheck)

    p = sub.add_parser("bench", help="Ratio operation counts as CSV")
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--legit", type=int, default=2)
    p.add_argument("--fraction", default="1/3")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConservationViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
