"""Barycentric operations, binary terms, and executable groupoid laws.

Points are tuples of exact rationals.  The binary operation with parameter p
sends (x, y) to (1-p)x + py; terms are binary trees of such operations over
variable leaves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .scalar import format_rational, parse_rational

Point = tuple[Fraction, ...]


class ModeError(ValueError):
    pass


def as_point(coords: Sequence) -> Point:
    return tuple(Fraction(c) for c in coords)


def bary_op(x: Sequence, y: Sequence, p) -> Point:
    """(1-p)x + py, computed exactly componentwise."""
    x, y, p = as_point(x), as_point(y), Fraction(p)
    if len(x) != len(y):
        raise ModeError(f"dimension mismatch: {len(x)} vs {len(y)}")
    q = 1 - p
    return tuple(q * a + p * b for a, b in zip(x, y))


@dataclass(frozen=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Node:
    left: "Term"
    right: "Term"
    param: Fraction


Term = Union[Leaf, Node]


def eval_term(term: Term, assignment: Mapping[int, Sequence]) -> Point:
    """Bottom-up exact evaluation of a term under a variable assignment."""
    if isinstance(term, Leaf):
        if term.index not in assignment:
            raise ModeError(f"unbound variable x{term.index}")
        return as_point(assignment[term.index])
    return bary_op(
        eval_term(term.left, assignment), eval_term(term.right, assignment), term.param
    )


def term_coefficients(term: Term, arity: int) -> list[Fraction]:
    """Coefficients (xi_0..xi_k) of the affine combination the term computes."""
    if isinstance(term, Leaf):
        if not 0 <= term.index < arity:
            raise ModeError(f"variable x{term.index} outside arity {arity}")
        coeffs = [Fraction(0)] * arity
        coeffs[term.index] = Fraction(1)
        return coeffs
    left = term_coefficients(term.left, arity)
    right = term_coefficients(term.right, arity)
    p = Fraction(term.param)
    return [(1 - p) * a + p * b for a, b in zip(left, right)]


def format_term(term: Term) -> str:
    if isinstance(term, Leaf):
        return f"x{term.index}"
    return "(op {} {} {})".format(
        format_term(term.left), format_term(term.right), format_rational(term.param)
    )


_TOKEN = re.compile(r"\(|\)|[^()\s]+")


def parse_term(text: str) -> Term:
    """Parse the S-expression form: leaf `x<i>`, node `(op <l> <r> <p>)`."""
    tokens = _TOKEN.findall(text)
    pos = 0

    def read() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise ModeError("unexpected end of term")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] != "op":
                raise ModeError("expected 'op' after '('")
            pos += 1
            left = read()
            right = read()
            if pos >= len(tokens):
                raise ModeError("missing parameter")
            try:
                param = parse_rational(tokens[pos])
            except ValueError as exc:
                raise ModeError(f"bad parameter {tokens[pos]!r}") from exc
            pos += 1
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ModeError("missing ')'")
            pos += 1
            return Node(left, right, param)
        if tok.startswith("x") and tok[1:].isdigit():
            return Leaf(int(tok[1:]))
        raise ModeError(f"unexpected token {tok!r}")

    term = read()
    if pos != len(tokens):
        raise ModeError("trailing tokens after term")
    return term


# ---------------------------------------------------------------------------
# Groupoid laws
# ---------------------------------------------------------------------------


@dataclass
class LawReport:
    """Exact law-check outcome: instance counts, violations, skipped probes."""

    checked: dict[str, int]
    violations: list[tuple[str, tuple]]
    cancellation_not_applicable: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def check_laws(sample: Sequence[Sequence], parameters: Sequence) -> LawReport:
    """Verify the groupoid laws exactly on all combinations of the sample.

    Laws checked: idempotence x x p = x; twisted commutativity
    x y p = y x (1-p); the entropic law
    (x y p)(z t p) q = (x z q)(y t q) p; and cancellativity
    x y p = x z p implies y = z for p != 0.
    """
    points = [as_point(s) for s in sample]
    if not points:
        raise ModeError("empty sample")
    params = [Fraction(p) for p in parameters]
    report = LawReport(
        checked={"idempotence": 0, "commutativity": 0, "entropic": 0, "cancellativity": 0},
        violations=[],
    )
    for p in params:
        for x in points:
            report.checked["idempotence"] += 1
            if bary_op(x, x, p) != x:
                report.violations.append(("idempotence", (x, p)))
        for x in points:
            for y in points:
                report.checked["commutativity"] += 1
                if bary_op(x, y, p) != bary_op(y, x, 1 - p):
                    report.violations.append(("commutativity", (x, y, p)))
        for x in points:
            for y in points:
                for z in points:
                    if p == 0:
                        report.cancellation_not_applicable += 1
                        continue
                    report.checked["cancellativity"] += 1
                    if bary_op(x, y, p) == bary_op(x, z, p) and y != z:
                        report.violations.append(("cancellativity", (x, y, z, p)))
        for q in params:
            for x in points:
                for y in points:
                    for z in points:
                        for t in points:
                            report.checked["entropic"] += 1
                            lhs = bary_op(bary_op(x, y, p), bary_op(z, t, p), q)
                            rhs = bary_op(bary_op(x, z, q), bary_op(y, t, q), p)
                            if lhs != rhs:
                                report.violations.append(("entropic", (x, y, z, t, p, q)))
    return report


def division_point_relations(
    y: Sequence, x: Sequence, p
) -> tuple[Point, tuple[bool, bool, bool]]:
    """Interior division point b of the segment from y to x, with its inverse laws.

    Returns b = (1-p)y + px together with three exact checks:
    x = y b (1/p), y = b x (p/(p-1)), and dist(y,x)^2 * p^2 = dist(y,b)^2
    (distances squared keep everything rational).
    """
    y, x, p = as_point(y), as_point(x), Fraction(p)
    if not 0 < p < 1:
        raise ModeError("parameter must lie strictly between 0 and 1")
    if y == x:
        raise ModeError("points must be distinct")
    b = bary_op(y, x, p)
    first = bary_op(y, b, Fraction(1) / p) == x
    second = bary_op(b, x, p / (p - 1)) == y
    dist2_yx = sum((a - c) ** 2 for a, c in zip(y, x))
    dist2_yb = sum((a - c) ** 2 for a, c in zip(y, b))
    third = dist2_yx * p * p == dist2_yb
    return b, (first, second, third)
