"""Convex hull membership over Q and over subrings, and segment machinery.

A point d belongs to the ring-coefficient hull of X when some coefficient
vector xi with entries in the ring's closed unit interval satisfies
sum(xi) = 1 and sum(xi_i * x_i) = d.  Over Q this is one exact feasibility
test.  Over a localization Z[S^-1] the rational coefficient polytope is
intersected with the ring lattice: its affine hull is computed via implicit
equalities, solvability of that hull over the ring is decided by Smith
normal form, and a witness is built by perturbing a relative interior point
along integer kernel directions scaled by inverse prime powers.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .linalg import LinearConstraint
from .mode import Node, Leaf, Point, as_point, bary_op, eval_term
from .scalar import (
    RingSpec,
    ring_contains,
    s_free_part,
    smallest_inverted_prime,
)


class HullError(ValueError):
    pass


@dataclass(frozen=True)
class BaryCombination:
    """A convex combination: (generator index, positive coefficient) pairs."""

    support: tuple[tuple[int, Fraction], ...]

    def coefficient_vector(self, size: int) -> list[Fraction]:
        xi = [Fraction(0)] * size
        for idx, c in self.support:
            xi[idx] = c
        return xi

    def evaluate(self, points: Sequence[Sequence]) -> Point:
        points = [as_point(p) for p in points]
        dim = len(points[0])
        acc = [Fraction(0)] * dim
        for idx, c in self.support:
            for j in range(dim):
                acc[j] += c * points[idx][j]
        return tuple(acc)


def _check_points(points: Sequence[Sequence]) -> list[Point]:
    pts = [as_point(p) for p in points]
    if not pts:
        raise HullError("empty generating set")
    if any(len(p) != len(pts[0]) for p in pts):
        raise HullError("inconsistent point dimensions")
    return pts


def _membership_constraints(d: Point, pts: list[Point]) -> list[LinearConstraint]:
    m = len(pts)
    rows: list[LinearConstraint] = []
    for coord in range(len(d)):
        rows.append(
            LinearConstraint([p[coord] for p in pts], "==", d[coord])
        )
    rows.append(LinearConstraint([1] * m, "==", 1))
    for i in range(m):
        rows.append(
            LinearConstraint([Fraction(int(j == i)) for j in range(m)], ">=", 0)
        )
    return rows


def _combination(xi: Sequence[Fraction]) -> BaryCombination:
    return BaryCombination(tuple((i, c) for i, c in enumerate(xi) if c != 0))


@dataclass(frozen=True)
class MembershipReport:
    """Full verdict for a hull membership query, with reasons for the CLI."""

    member: bool
    combination: Optional[BaryCombination]
    reason: str
    certificate: Optional[tuple[Fraction, ...]] = None
    rational_point: Optional[tuple[Fraction, ...]] = None


def membership_report_Q(d: Sequence, points: Sequence[Sequence]) -> MembershipReport:
    pts = _check_points(points)
    d = as_point(d)
    if len(d) != len(pts[0]):
        raise HullError("query point dimension mismatch")
    result = linalg.lp_feasible(_membership_constraints(d, pts))
    if not result.feasible:
        return MembershipReport(False, None, "rational-hull-infeasible", result.certificate)
    return MembershipReport(True, _combination(result.witness), "rational-combination")


def hull_member_Q(d: Sequence, points: Sequence[Sequence]) -> Optional[BaryCombination]:
    """A rational convex combination of the points equal to d, if one exists."""
    return membership_report_Q(d, points).combination


def _nearest_with_denominator(q: Fraction, den: int) -> Fraction:
    num, rem = divmod(q * den, 1)
    return Fraction(int(num) + (1 if rem >= Fraction(1, 2) else 0), den)


def membership_report_T(
    d: Sequence, points: Sequence[Sequence], ring: RingSpec
) -> MembershipReport:
    pts = _check_points(points)
    d = as_point(d)
    if len(d) != len(pts[0]):
        raise HullError("query point dimension mismatch")
    m = len(pts)
    constraints = _membership_constraints(d, pts)
    feas = linalg.lp_feasible(constraints)
    if not feas.feasible:
        return MembershipReport(False, None, "rational-hull-infeasible", feas.certificate)

    # The affine hull of the coefficient polytope: the equality rows plus the
    # nonnegativity rows that are tight on every feasible point.
    implicit = set(linalg.implicit_equalities(constraints))
    eq_rows: list[list[Fraction]] = []
    eq_rhs: list[Fraction] = []
    for i, con in enumerate(constraints):
        if con.rel == "==" or i in implicit:
            a, b = con.oriented()
            eq_rows.append(list(a))
            eq_rhs.append(b)
    solved = linalg.solve_affine(eq_rows, eq_rhs)
    assert solved is not None  # the system is feasible
    particular, kernel = solved

    if not kernel:
        xi = particular
        if all(ring_contains(c, ring) for c in xi):
            return MembershipReport(True, _combination(xi), "unique-ring-combination")
        return MembershipReport(
            False, None, "unique-rational-point-not-in-ring", rational_point=tuple(xi)
        )

    # Does the affine hull carry any ring point at all?  Clear denominators
    # and decide solvability over Z[S^-1] by Smith normal form: each nonzero
    # invariant factor must divide its transformed right-hand side up to
    # inverted primes, and zero rows must have zero right-hand side.
    int_rows: list[list[int]] = []
    int_rhs: list[int] = []
    for row, b in zip(eq_rows, eq_rhs):
        lcm = 1
        for c in row + [b]:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        int_rows.append([int(c * lcm) for c in row])
        int_rhs.append(int(b * lcm))
    u, dmat, v = linalg.smith_normal_form(int_rows)
    c_vec = [
        sum(u[i][j] * int_rhs[j] for j in range(len(int_rhs)))
        for i in range(len(int_rows))
    ]
    y = [Fraction(0)] * m
    for i in range(len(int_rows)):
        di = dmat[i][i] if i < m else 0
        if di == 0:
            if c_vec[i] != 0:
                return MembershipReport(False, None, "no-ring-point-on-affine-hull")
        else:
            if c_vec[i] % s_free_part(di, ring) != 0:
                return MembershipReport(False, None, "no-ring-point-on-affine-hull")
            y[i] = Fraction(c_vec[i], di)
    ring_point = [
        sum((Fraction(v[i][j]) * y[j] for j in range(m)), Fraction(0)) for i in range(m)
    ]
    assert all(ring_contains(c, ring) for c in ring_point)

    # Ring points are dense on the affine hull, and the polytope has interior
    # there, so a witness exists: walk from the known ring point toward a
    # relative interior point along integer kernel directions, rounding the
    # steps to denominators p^k until all inequalities hold.
    interior = list(linalg.relative_interior_point(constraints))
    int_kernel = []
    for vec in kernel:
        lcm = 1
        for c in vec:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        int_kernel.append([Fraction(int(c * lcm)) for c in vec])
    columns = [[int_kernel[j][i] for j in range(len(int_kernel))] for i in range(m)]
    delta = [interior[i] - ring_point[i] for i in range(m)]
    alpha_solution = linalg.solve_affine(columns, delta)
    assert alpha_solution is not None  # both points lie on the affine hull
    alpha = alpha_solution[0]
    p = smallest_inverted_prime(ring)
    den = 1
    for _ in range(200):
        steps = [_nearest_with_denominator(a, den) for a in alpha]
        xi = list(ring_point)
        for step, direction in zip(steps, int_kernel):
            for i in range(m):
                xi[i] += step * direction[i]
        if all(c >= 0 for c in xi):
            assert all(ring_contains(c, ring) for c in xi)
            return MembershipReport(True, _combination(xi), "ring-combination")
        den *= p
    raise AssertionError("ring witness search failed to converge")


def hull_member_T(
    d: Sequence, points: Sequence[Sequence], ring: RingSpec
) -> Optional[BaryCombination]:
    """A combination with all coefficients in the ring's unit interval, if any."""
    return membership_report_T(d, points, ring).combination


def caratheodory(d: Sequence, points: Sequence[Sequence]) -> tuple[list[int], list[Fraction]]:
    """Affinely independent positive recombination of a hull member.

    Starting from any rational combination, affine dependencies of the
    support are removed one at a time by shifting along the dependency until
    a coefficient reaches zero.  The result uses at most dim+1 points.
    """
    pts = _check_points(points)
    d_pt = as_point(d)
    if d_pt in pts:
        return [pts.index(d_pt)], [Fraction(1)]
    combo = hull_member_Q(d, pts)
    if combo is None:
        raise HullError("point is not a member of the rational hull")
    indices = [i for i, _ in combo.support]
    coeffs = [c for _, c in combo.support]
    while True:
        support = [pts[i] for i in indices]
        if len(support) <= 1:
            break
        # affine dependency: sum(c_i * a_i) = 0 with sum(c_i) = 0, c != 0
        dim = len(support[0])
        rows = [[support[j][coord] for j in range(len(support))] for coord in range(dim)]
        rows.append([Fraction(1)] * len(support))
        solved = linalg.solve_affine(rows, [Fraction(0)] * (dim + 1))
        assert solved is not None
        _, kernel = solved
        if not kernel:
            break
        dep = kernel[0]
        if all(c <= 0 for c in dep):
            dep = [-c for c in dep]
        # largest step keeping all coefficients nonnegative; hits a zero
        step = min(coeffs[j] / dep[j] for j in range(len(dep)) if dep[j] > 0)
        coeffs = [c - step * g for c, g in zip(coeffs, dep)]
        keep = [j for j, c in enumerate(coeffs) if c != 0]
        indices = [indices[j] for j in keep]
        coeffs = [coeffs[j] for j in keep]
    return indices, coeffs


# ---------------------------------------------------------------------------
# V-polytopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VPolytope:
    """A bounded rational polytope given by finitely many generating points."""

    generators: tuple[Point, ...]
    _vertices: list = field(default_factory=lambda: [None], repr=False, compare=False)

    def __init__(self, generators: Sequence[Sequence]):
        pts = _check_points(generators)
        object.__setattr__(self, "generators", tuple(pts))
        object.__setattr__(self, "_vertices", [None])

    @property
    def dimension(self) -> int:
        return len(self.generators[0])

    @property
    def vertices(self) -> tuple[Point, ...]:
        """Extreme points: generators not in the rational hull of the others."""
        if self._vertices[0] is None:
            unique = list(dict.fromkeys(self.generators))
            if len(unique) == 1:
                self._vertices[0] = tuple(unique)
            else:
                self._vertices[0] = tuple(
                    g
                    for i, g in enumerate(unique)
                    if hull_member_Q(g, unique[:i] + unique[i + 1 :]) is None
                )
        return self._vertices[0]

    @property
    def affine_dimension(self) -> int:
        base = self.generators[0]
        diffs = [[c - b for c, b in zip(g, base)] for g in self.generators[1:]]
        return linalg.rank(diffs) if diffs else 0

    def contains(self, point: Sequence) -> bool:
        return hull_member_Q(point, self.generators) is not None


# ---------------------------------------------------------------------------
# T-segments and the bounded closure engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TSegment:
    """The slice of the ring line through anchors a, b between two parameters."""

    anchor_a: Point
    anchor_b: Point
    start: Fraction
    end: Fraction

    def __init__(self, anchor_a: Sequence, anchor_b: Sequence, start, end):
        a, b = as_point(anchor_a), as_point(anchor_b)
        if a == b:
            raise HullError("segment anchors must differ")
        object.__setattr__(self, "anchor_a", a)
        object.__setattr__(self, "anchor_b", b)
        object.__setattr__(self, "start", Fraction(start))
        object.__setattr__(self, "end", Fraction(end))


def t_segment_points(seg: TSegment, ring: RingSpec, depth: int) -> list[Point]:
    """All segment points whose parameter denominator divides (prod S)^depth."""
    if depth < 0:
        raise HullError("depth must be nonnegative")
    if not (ring_contains(seg.start, ring) and ring_contains(seg.end, ring)):
        raise HullError("segment endpoint parameters must lie in the ring")
    scale = 1
    for p in ring.inverted_primes:
        scale *= p
    den = scale**depth
    lo, hi = min(seg.start, seg.end), max(seg.start, seg.end)
    first = math.ceil(lo * den)
    last = math.floor(hi * den)
    return [
        bary_op(seg.anchor_a, seg.anchor_b, Fraction(k, den))
        for k in range(first, last + 1)
    ]


def ring_lines_through(
    c: Sequence, d: Sequence, ring: RingSpec, line_bound: int
) -> list[TSegment]:
    """Ring segments with endpoints c and d, one per ring line through both.

    Ring lines through distinct c, d correspond (up to reparametrization by
    ring units) to positive integers m free of inverted primes: anchor the
    line at c with direction (d - c)/m, so c sits at parameter 0 and d at m.
    Only m <= line_bound are explored.
    """
    c, d = as_point(c), as_point(d)
    if c == d:
        raise HullError("need two distinct points")
    segments = []
    for m in range(1, line_bound + 1):
        if s_free_part(m, ring) != m:
            continue
        direction_end = tuple(a + (b - a) / m for a, b in zip(c, d))
        segments.append(TSegment(c, direction_end, Fraction(0), Fraction(m)))
    return segments


def segment_closure_bounded(
    points: Sequence[Sequence],
    ring: RingSpec,
    depth: int,
    rounds: int,
    line_bound: int = 3,
) -> set[Point]:
    """A bounded under-approximation of the least segment-convex superset.

    Each round adds, for every pair of current points, the depth-bounded
    slices of the ring segments joining them on every ring line explored up
    to line_bound.  Monotone in depth, rounds, and line_bound; the result
    always stays inside the real convex hull of the input.
    """
    current = set(_check_points(points))
    for _ in range(rounds):
        additions: set[Point] = set()
        for c, d in itertools.combinations(sorted(current), 2):
            for seg in ring_lines_through(c, d, ring, line_bound):
                additions.update(t_segment_points(seg, ring, depth))
        current |= additions
    return current


# ---------------------------------------------------------------------------
# Convexity probe
# ---------------------------------------------------------------------------


@dataclass
class ConvexityReport:
    samples: int
    failures: list[tuple[Point, Point, Fraction]]

    @property
    def q_convex_so_far(self) -> bool:
        return not self.failures


def _random_ring_term(rng: random.Random, arity: int, ring: RingSpec, depth: int):
    if depth == 0 or rng.random() < 0.3:
        return Leaf(rng.randrange(arity))
    p = smallest_inverted_prime(ring)
    exp = rng.randint(1, 3)
    num = rng.randint(1, p**exp - 1)
    return Node(
        _random_ring_term(rng, arity, ring, depth - 1),
        _random_ring_term(rng, arity, ring, depth - 1),
        Fraction(num, p**exp),
    )


def q_convexity_probe(
    generators: Sequence[Sequence], ring: RingSpec, samples: int, seed: int
) -> ConvexityReport:
    """Probe whether the ring hull of the generators is closed under all
    rational barycentric operations; failures witness that it is not."""
    pts = _check_points(generators)
    rng = random.Random(seed)
    report = ConvexityReport(samples, [])
    if len(pts) == 1:
        return report
    for _ in range(samples):
        assignment = dict(enumerate(pts))
        a = eval_term(_random_ring_term(rng, len(pts), ring, 3), assignment)
        b = eval_term(_random_ring_term(rng, len(pts), ring, 3), assignment)
        q = Fraction(rng.randint(1, 11), 12)
        probe = bary_op(a, b, q)
        if hull_member_T(probe, pts, ring) is None:
            report.failures.append((a, b, q))
    return report
