"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
Everything is exact; no tolerances apply anywhere.
"""

import itertools
import random
import time
from fractions import Fraction

from baryalg.affine import (
    AffineError,
    AffineMap,
    hexagon_relation_check,
    iso_decide,
    max_independent_subset,
)
from baryalg.formula import Relation, check_satisfaction, synth_phi, verify_phi
from baryalg.hull import (
    TSegment,
    VPolytope,
    caratheodory,
    hull_member_T,
    segment_closure_bounded,
    t_segment_points,
)
from baryalg.linalg import rank
from baryalg.mode import check_laws
from baryalg.scalar import DYADIC, RingSpec, ring_contains

F = Fraction


def _report(number: int, ok: bool, detail: str):
    status = "PASS" if ok else "FAIL"
    print(f"acceptance {number}: {status} - {detail}")
    assert ok, f"criterion {number} failed: {detail}"


def test_criterion_1_canonical_chain_formula():
    phi = synth_phi([F(-1, 2), F(3, 2)], RingSpec([3]))
    third = F(1, 3)
    expected = (
        Relation(0, 3, third, 1),
        Relation(1, 4, third, 2),
        Relation(2, 5, third, 3),
        Relation(3, 6, third, 4),
        Relation(6, 3, third, 5),
    )
    ok = (
        phi.relations == expected
        and phi.input_bindings == ((0, 0), (4, 1))
        and phi.output_var == 6
        and phi.num_vars == 7
        and verify_phi(phi, [F(-1, 2), F(3, 2)])
    )
    _report(1, ok, "five-relation chain with bindings x0=u0, x1=u4, y=u6, all 1/3")


def _mixed_vector(rng: random.Random):
    """k <= 5, every denominator <= 64, mixed signs, sum exactly 1."""
    while True:
        k = rng.randint(1, 5)
        den = rng.randint(2, 64)
        nums = [rng.randint(-2 * den, 2 * den) for _ in range(k)]
        nums.append(den - sum(nums))
        coeffs = [F(n, den) for n in nums]
        if not any(c < 0 for c in coeffs):
            continue
        if max(abs(c) for c in coeffs) > 2:
            continue
        return coeffs


def test_criterion_2_formula_soundness_suite():
    rng = random.Random(2024)
    rings = [DYADIC, RingSpec([3]), RingSpec([2, 5])]
    failures = 0
    for _ in range(100):
        xi = _mixed_vector(rng)
        for ring in rings:
            phi = synth_phi(xi, ring)
            if not verify_phi(phi, xi):
                failures += 1
                continue
            dim = rng.randint(1, 2)
            points = [
                tuple(F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(dim))
                for _ in range(len(xi))
            ]
            target = tuple(
                sum((xi[i] * points[i][j] for i in range(len(xi))), F(0))
                for j in range(dim)
            )
            if check_satisfaction(phi, points, target) is None:
                failures += 1
            shift = F(rng.randint(1, 5), rng.randint(1, 7))
            off = (target[0] + shift,) + tuple(target[1:])
            if check_satisfaction(phi, points, off) is not None:
                failures += 1
    _report(2, failures == 0, "100 mixed-sign vectors x 3 rings, presence and absence exact")


def test_criterion_3_dyadic_segment_separation():
    absent = hull_member_T([1], [(F(0),), (F(3),)], DYADIC) is None
    slice0 = t_segment_points(TSegment([0], [1], 0, 3), DYADIC, 0)
    present = (F(1),) in slice0
    _report(3, absent and present, "1 escapes the dyadic hull of {0,3} yet lies on the unit-direction segment")


def _enumerate_dyadic_witness(d, points, power):
    den = 2**power
    m = len(points)
    dim = len(points[0])
    for split in itertools.combinations(range(den + m - 1), m - 1):
        parts = []
        prev = -1
        for s in split + (den + m - 1,):
            parts.append(s - prev - 1)
            prev = s
        xi = [F(c, den) for c in parts]
        value = tuple(
            sum((xi[i] * points[i][j] for i in range(m)), F(0)) for j in range(dim)
        )
        if value == d:
            return True
    return False


def test_criterion_4_ring_membership_vs_enumeration():
    rng = random.Random(4)
    disagreements = 0
    for _ in range(200):
        dim = rng.randint(1, 2)
        m = rng.randint(1, 4)
        points = [
            tuple(F(rng.randint(-3, 3), rng.choice([1, 2, 4])) for _ in range(dim))
            for _ in range(m)
        ]
        if rng.random() < 0.6:
            weights = [F(rng.randint(0, 8), 8) for _ in range(m)]
            total = sum(weights)
            if total == 0:
                weights[0] = F(1)
                total = F(1)
            weights = [w / total for w in weights]
            d = tuple(
                sum((weights[i] * points[i][j] for i in range(m)), F(0))
                for j in range(dim)
            )
        else:
            d = tuple(F(rng.randint(-3, 3), rng.choice([1, 3])) for _ in range(dim))
        decision = hull_member_T(d, points, DYADIC)
        if _enumerate_dyadic_witness(d, points, 4) and decision is None:
            disagreements += 1
        if decision is None:
            if any(_enumerate_dyadic_witness(d, points, k) for k in range(5)):
                disagreements += 1
        else:
            xi = decision.coefficient_vector(m)
            value = tuple(
                sum((xi[i] * points[i][j] for i in range(m)), F(0))
                for j in range(dim)
            )
            if value != d or not all(
                ring_contains(c, DYADIC) and 0 <= c <= 1 for c in xi
            ):
                disagreements += 1
    _report(4, disagreements == 0, "200 instances against denominator-16 enumeration")


def test_criterion_5_caratheodory_contract():
    rng = random.Random(5)
    violations = 0
    for _ in range(100):
        dim = rng.randint(1, 3)
        m = rng.randint(1, 7)
        points = [
            tuple(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(dim))
            for _ in range(m)
        ]
        weights = [F(rng.randint(0, 6)) for _ in range(m)]
        if sum(weights) == 0:
            weights[0] = F(1)
        weights = [w / sum(weights) for w in weights]
        d = tuple(
            sum((weights[i] * points[i][j] for i in range(m)), F(0))
            for j in range(dim)
        )
        indices, coeffs = caratheodory(d, points)
        support = [points[i] for i in indices]
        diffs = [[c - b for c, b in zip(q, support[0])] for q in support[1:]]
        independent = rank(diffs) == len(diffs)
        recombined = tuple(
            sum((coeffs[k] * support[k][j] for k in range(len(support))), F(0))
            for j in range(dim)
        )
        if not (
            independent
            and all(c > 0 for c in coeffs)
            and sum(coeffs) == 1
            and recombined == d
            and len(indices) <= dim + 1
        ):
            violations += 1
    _report(5, violations == 0, "100 random hull members recombined exactly")


def test_criterion_6_groupoid_laws():
    rng = random.Random(6)
    counts = {"idempotence": 0, "commutativity": 0, "entropic": 0, "cancellativity": 0}
    violations = 0
    for _ in range(500):
        points = [
            tuple(F(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(2))
            for _ in range(2)
        ]
        params = [F(rng.randint(0, 12), 12) for _ in range(2)]
        report = check_laws(points, params)
        violations += len(report.violations)
        for law, n in report.checked.items():
            counts[law] += n
    enough = all(n >= 500 for n in counts.values())
    _report(6, violations == 0 and enough, f"law instances checked: {counts}")


def _random_invertible(rng: random.Random) -> AffineMap:
    while True:
        try:
            return AffineMap(
                [[F(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)],
                [F(rng.randint(-5, 5)) for _ in range(2)],
            )
        except AffineError:
            continue


def test_criterion_7_equivalence_roundtrip():
    rng = random.Random(7)
    started = time.monotonic()
    failures = 0
    for _ in range(50):
        gens = [
            (F(rng.randint(-5, 5)), F(rng.randint(-5, 5)))
            for _ in range(rng.randint(3, 6))
        ]
        left = VPolytope(gens)
        psi = _random_invertible(rng)
        right = VPolytope([psi.apply(g) for g in gens])
        verdict = iso_decide(left, right, DYADIC, samples=100, seed=rng.randint(0, 9999))
        if not (verdict.isomorphic and verdict.homomorphism_exact):
            failures += 1
            continue
        witness = verdict.witness
        if {witness.apply(v) for v in left.vertices} != set(right.vertices):
            failures += 1
    square = VPolytope([(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1))])
    triangle = VPolytope([(F(0), F(0)), (F(1), F(0)), (F(0), F(1))])
    negative = iso_decide(square, triangle, DYADIC, seed=1)
    if negative.isomorphic:
        failures += 1
    elapsed = time.monotonic() - started
    _report(
        7,
        failures == 0 and elapsed < 30,
        f"50 round-trips with exact witnesses in {elapsed:.1f}s",
    )


def test_criterion_8_independent_subset_invariance():
    rng = random.Random(8)
    failures = 0
    for _ in range(50):
        pts = [
            tuple(F(rng.randint(-4, 4)) for _ in range(rng.randint(1, 3)))
            for _ in range(rng.randint(1, 8))
        ]
        dim = len(pts[0])
        pts = [p[:dim] + (F(0),) * (dim - len(p)) for p in pts]
        size = len(max_independent_subset(pts))
        for _ in range(10):
            shuffled = pts[:]
            rng.shuffle(shuffled)
            if len(max_independent_subset(shuffled)) != size:
                failures += 1
    _report(8, failures == 0, "greedy basis size invariant under 10 permutations x 50 sets")


def test_criterion_9_hexagon_relation():
    _report(9, hexagon_relation_check(), "opposite-vertex midpoints agree; vertices stay extreme")


def test_criterion_10_closure_engine_sanity():
    base = [(F(0),), (F(3),)]
    main = segment_closure_bounded(base, DYADIC, 2, 2)
    contains_one = (F(1),) in main
    inside = all(0 <= p[0] <= 3 for p in main)
    deeper = segment_closure_bounded(base, DYADIC, 3, 2)
    longer = segment_closure_bounded(base, DYADIC, 2, 3)
    shallower = segment_closure_bounded(base, DYADIC, 1, 2)
    fewer = segment_closure_bounded(base, DYADIC, 2, 1)
    monotone = (
        shallower <= main <= deeper and fewer <= main <= longer
    )
    _report(
        10,
        contains_one and inside and monotone,
        f"closure of {{0,3}} has {len(main)} points, stays in [0,3], grows monotonically",
    )
