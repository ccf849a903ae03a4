import itertools
import random
from fractions import Fraction

import pytest

from baryalg.hull import (
    HullError,
    TSegment,
    VPolytope,
    caratheodory,
    hull_member_Q,
    hull_member_T,
    membership_report_T,
    q_convexity_probe,
    ring_lines_through,
    segment_closure_bounded,
    t_segment_points,
)
from baryalg.linalg import rank
from baryalg.mode import Leaf, Node, eval_term
from baryalg.scalar import DYADIC, RingSpec, ring_contains

F = Fraction


def _points(*coords):
    return [tuple(F(c) for c in pt) for pt in coords]


def _combination_evaluates(combo, points, target):
    assert combo.evaluate(points) == tuple(F(c) for c in target)
    total = sum((c for _, c in combo.support), F(0))
    assert total == 1
    assert all(c > 0 for _, c in combo.support)


def test_hull_member_Q_examples():
    combo = hull_member_Q([1], _points([0], [3]))
    assert combo is not None
    assert combo.coefficient_vector(2) == [F(2, 3), F(1, 3)]
    assert hull_member_Q([4], _points([0], [3])) is None
    square = _points([0, 0], [1, 0], [1, 1], [0, 1])
    combo = hull_member_Q([F(1, 2), F(1, 2)], square)
    assert combo is not None
    _combination_evaluates(combo, square, (F(1, 2), F(1, 2)))


def test_hull_member_T_examples():
    assert hull_member_T([1], _points([0], [3]), DYADIC) is None
    combo = hull_member_T([F(3, 2)], _points([0], [3]), DYADIC)
    assert combo is not None
    assert combo.coefficient_vector(2) == [F(1, 2), F(1, 2)]
    combo = hull_member_T([1], _points([0], [F(1, 2)], [3]), DYADIC)
    assert combo is not None
    xi = combo.coefficient_vector(3)
    assert all(ring_contains(c, DYADIC) for c in xi)
    _combination_evaluates(combo, _points([0], [F(1, 2)], [3]), (1,))


def test_hull_member_T_reports():
    report = membership_report_T([1], _points([0], [3]), DYADIC)
    assert not report.member
    assert report.reason == "unique-rational-point-not-in-ring"
    assert report.rational_point == (F(2, 3), F(1, 3))
    report = membership_report_T([4], _points([0], [3]), DYADIC)
    assert report.reason == "rational-hull-infeasible"
    assert report.certificate is not None


def test_hull_member_T_affine_hull_obstruction():
    # inside the rational hull, off the unique rational solution, and the
    # affine hull of coefficients carries no ring point: x = 1/3 over {0, 1}
    report = membership_report_T([F(1, 3)], _points([0], [1]), DYADIC)
    assert not report.member
    assert report.reason == "unique-rational-point-not-in-ring"
    # with a redundant generator the coefficient polytope becomes a segment
    # whose affine hull still has dyadic points
    combo = hull_member_T([F(1, 2)], _points([0], [1], [1]), DYADIC)
    assert combo is not None
    # a segment-shaped coefficient polytope whose affine hull pins one
    # coefficient to 1/3: no dyadic point exists anywhere on the hull
    report = membership_report_T(
        (F(1, 3), F(1, 2)), _points([0, 0], [1, 0], [0, 1], [0, 2]), DYADIC
    )
    assert not report.member
    assert report.reason == "no-ring-point-on-affine-hull"


def _enumerate_ring_witness(d, points, power):
    """Brute-force oracle: coefficients with denominator dividing 2**power."""
    den = 2**power
    m = len(points)
    dim = len(points[0])
    for split in itertools.combinations(range(den + m - 1), m - 1):
        parts = []
        prev = -1
        for s in split + (den + m - 1,):
            parts.append(s - prev - 1)
            prev = s
        xi = [F(k, den) for k in parts]
        if sum(xi) != 1:
            continue
        value = tuple(
            sum((xi[i] * points[i][j] for i in range(m)), F(0)) for j in range(dim)
        )
        if value == d:
            return xi
    return None


def test_hull_member_T_agrees_with_enumeration():
    rng = random.Random(13)
    for _ in range(60):
        dim = rng.randint(1, 2)
        m = rng.randint(1, 4)
        points = [
            tuple(F(rng.randint(-3, 3), rng.choice([1, 2, 4])) for _ in range(dim))
            for _ in range(m)
        ]
        if rng.random() < 0.7:
            oracle_xi = [F(rng.randint(0, 8), 8) for _ in range(m)]
            total = sum(oracle_xi)
            if total == 0:
                continue
            oracle_xi = [c / total for c in oracle_xi]
            d = tuple(
                sum((oracle_xi[i] * points[i][j] for i in range(m)), F(0))
                for j in range(dim)
            )
        else:
            d = tuple(F(rng.randint(-3, 3), rng.choice([1, 3])) for _ in range(dim))
        decision = hull_member_T(d, points, DYADIC)
        found = _enumerate_ring_witness(d, points, 4)
        if found is not None:
            assert decision is not None
        if decision is None:
            for power in range(5):
                assert _enumerate_ring_witness(d, points, power) is None
        else:
            xi = decision.coefficient_vector(m)
            assert all(ring_contains(c, DYADIC) for c in xi)
            assert all(0 <= c <= 1 for c in xi)
            value = tuple(
                sum((xi[i] * points[i][j] for i in range(m)), F(0))
                for j in range(dim)
            )
            assert value == d


def test_hull_member_T_implies_Q():
    rng = random.Random(3)
    ring = RingSpec([2, 5])
    for _ in range(25):
        points = [
            (F(rng.randint(-4, 4)), F(rng.randint(-4, 4))) for _ in range(3)
        ]
        d = (F(rng.randint(-4, 4), 2), F(rng.randint(-4, 4), 2))
        if hull_member_T(d, points, ring) is not None:
            assert hull_member_Q(d, points) is not None


def _affinely_independent(points):
    base = points[0]
    diffs = [[c - b for c, b in zip(p, base)] for p in points[1:]]
    return rank(diffs) == len(diffs)


def test_caratheodory_examples():
    square = _points([0, 0], [1, 0], [1, 1], [0, 1])
    indices, coeffs = caratheodory([F(1, 2), F(1, 2)], square)
    assert len(indices) <= 3
    support = [square[i] for i in indices]
    assert _affinely_independent(support)
    assert sum(coeffs) == 1 and all(c > 0 for c in coeffs)
    recombined = tuple(
        sum((coeffs[k] * support[k][j] for k in range(len(support))), F(0))
        for j in range(2)
    )
    assert recombined == (F(1, 2), F(1, 2))

    indices, coeffs = caratheodory([3], _points([0], [3], [5]))
    assert indices == [1] and coeffs == [F(1)]

    indices, coeffs = caratheodory([1], _points([0], [3], [5]))
    assert len(indices) <= 2

    with pytest.raises(HullError):
        caratheodory([9], _points([0], [3]))


def test_caratheodory_contract_random():
    rng = random.Random(21)
    for _ in range(60):
        dim = rng.randint(1, 3)
        m = rng.randint(1, 6)
        points = [
            tuple(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(dim))
            for _ in range(m)
        ]
        weights = [F(rng.randint(0, 6)) for _ in range(m)]
        if sum(weights) == 0:
            continue
        weights = [w / sum(weights) for w in weights]
        d = tuple(
            sum((weights[i] * points[i][j] for i in range(m)), F(0))
            for j in range(dim)
        )
        indices, coeffs = caratheodory(d, points)
        assert len(indices) <= dim + 1
        assert len(set(indices)) == len(indices)
        support = [points[i] for i in indices]
        assert _affinely_independent(support)
        assert sum(coeffs) == 1 and all(c > 0 for c in coeffs)
        recombined = tuple(
            sum((coeffs[k] * support[k][j] for k in range(len(support))), F(0))
            for j in range(dim)
        )
        assert recombined == d


def test_vpolytope_vertices_and_dimension():
    square_with_center = VPolytope(
        _points([0, 0], [1, 0], [1, 1], [0, 1], [F(1, 2), F(1, 2)])
    )
    assert set(square_with_center.vertices) == set(
        _points([0, 0], [1, 0], [1, 1], [0, 1])
    )
    assert square_with_center.affine_dimension == 2
    segment = VPolytope(_points([0, 0], [2, 2], [1, 1]))
    assert set(segment.vertices) == set(_points([0, 0], [2, 2]))
    assert segment.affine_dimension == 1
    duplicated = VPolytope(_points([0], [1], [1], [0]))
    assert set(duplicated.vertices) == set(_points([0], [1]))
    singleton = VPolytope(_points([2, 3]))
    assert singleton.vertices == ((F(2), F(3)),)
    assert singleton.affine_dimension == 0
    # every generator recombines from the vertex set
    for g in square_with_center.generators:
        assert hull_member_Q(g, list(square_with_center.vertices)) is not None


def test_t_segment_points_examples():
    seg = TSegment([0], [1], 0, 3)
    assert [p[0] for p in t_segment_points(seg, DYADIC, 0)] == [0, 1, 2, 3]
    depth1 = {p[0] for p in t_segment_points(seg, DYADIC, 1)}
    assert depth1 == {0, F(1, 2), 1, F(3, 2), 2, F(5, 2), 3}
    seg = TSegment([0], [3], 0, 1)
    assert {p[0] for p in t_segment_points(seg, DYADIC, 1)} == {0, F(3, 2), 3}
    with pytest.raises(HullError):
        TSegment([1], [1], 0, 1)
    with pytest.raises(HullError):
        t_segment_points(TSegment([0], [1], F(1, 3), 1), DYADIC, 1)


def test_ring_lines_enumeration():
    segs = ring_lines_through([0], [3], DYADIC, 3)
    # direction divisors coprime to 2 up to 3: m = 1 and m = 3
    assert len(segs) == 2
    assert segs[0].anchor_b == (3,)
    assert segs[1].anchor_b == (1,)
    assert {p[0] for p in t_segment_points(segs[1], DYADIC, 0)} == {0, 1, 2, 3}


def test_closure_engine_examples():
    out = segment_closure_bounded(_points([0]), DYADIC, 2, 3)
    assert out == {(F(0),)}
    round1 = segment_closure_bounded(_points([0], [3]), DYADIC, 1, 1)
    assert (F(1),) in round1
    assert all(0 <= p[0] <= 3 for p in round1)
    assert all(isinstance(p[0], F) for p in round1)


def test_closure_engine_two_dimensional():
    out = segment_closure_bounded(_points([0, 0], [1, 1]), DYADIC, 1, 1)
    assert (F(1, 2), F(1, 2)) in out
    # everything stays on the diagonal within the endpoints
    assert all(p[0] == p[1] and 0 <= p[0] <= 1 for p in out)


def test_closure_engine_monotone():
    base = _points([0], [3])
    by_depth = [
        segment_closure_bounded(base, DYADIC, depth, 1) for depth in range(3)
    ]
    assert by_depth[0] <= by_depth[1] <= by_depth[2]
    by_rounds = [
        segment_closure_bounded(base, DYADIC, 1, rounds) for rounds in range(3)
    ]
    assert by_rounds[0] <= by_rounds[1] <= by_rounds[2]
    assert set(base) <= by_depth[0]


def test_random_ring_terms_live_in_ring_hull():
    # coefficient vectors of ring-parameter terms are accepted by the
    # ring-hull membership decision
    rng = random.Random(8)
    points = _points([0, 0], [2, 0], [0, 2])

    def random_term(depth):
        if depth == 0 or rng.random() < 0.4:
            return Leaf(rng.randrange(3))
        exp = rng.randint(1, 3)
        return Node(
            random_term(depth - 1),
            random_term(depth - 1),
            F(rng.randint(1, 2**exp - 1) if exp > 1 else 1, 2**exp),
        )

    for _ in range(20):
        term = random_term(3)
        value = eval_term(term, dict(enumerate(points)))
        assert hull_member_T(value, points, DYADIC) is not None


def test_q_convexity_probe_examples():
    report = q_convexity_probe(_points([0], [3]), DYADIC, 30, seed=2)
    assert report.failures  # the dyadic hull of {0,3} is not Q-convex
    report = q_convexity_probe(_points([0], [1]), DYADIC, 30, seed=2)
    assert report.failures  # thirds escape the dyadic hull of {0,1} too
    report = q_convexity_probe(_points([0]), DYADIC, 10, seed=2)
    assert not report.failures
