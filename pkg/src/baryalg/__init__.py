"""Exact arithmetic for barycentric algebras over subrings of the rationals.

Provides hull membership over the rationals and over localizations Z[S^-1],
Caratheodory decomposition, existential chain-formula synthesis, groupoid
law checking, and the affine-equivalence decision for rational V-polytopes
with explicit witness maps.  All arithmetic is exact.
"""

from .scalar import (
    DYADIC,
    Rational,
    RingSpec,
    ScalarError,
    format_rational,
    interval_member,
    parse_rational,
    prime_valuation,
    ring_contains,
    smallest_inverted_prime,
)
from .linalg import (
    LinearConstraint,
    LPResult,
    InfeasibleSystemError,
    implicit_equalities,
    lp_extremum,
    lp_feasible,
    relative_interior_point,
    rref,
    smith_normal_form,
    solve_affine,
    verify_farkas_certificate,
)
from .mode import (
    LawReport,
    Leaf,
    Node,
    Point,
    bary_op,
    check_laws,
    division_point_relations,
    eval_term,
    format_term,
    parse_term,
    term_coefficients,
)
from .hull import (
    BaryCombination,
    TSegment,
    VPolytope,
    caratheodory,
    hull_member_Q,
    hull_member_T,
    membership_report_Q,
    membership_report_T,
    q_convexity_probe,
    ring_lines_through,
    segment_closure_bounded,
    t_segment_points,
)
from .formula import (
    ChainFormula,
    FormulaError,
    Relation,
    SynthesisError,
    check_satisfaction,
    format_formula,
    formula_from_json,
    formula_to_json,
    membership_in_convex,
    synth_phi,
    verify_phi,
)
from .affine import (
    AffineMap,
    EquivalenceVerdict,
    IsoVerdict,
    affine_equivalence,
    affine_independent,
    extend_to_basis,
    hexagon_relation_check,
    iso_decide,
    map_from_correspondence,
    max_independent_subset,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "BaryCombination",
    "ChainFormula",
    "DYADIC",
    "EquivalenceVerdict",
    "FormulaError",
    "InfeasibleSystemError",
    "IsoVerdict",
    "LawReport",
    "Leaf",
    "LinearConstraint",
    "LPResult",
    "Node",
    "Point",
    "Rational",
    "Relation",
    "RingSpec",
    "ScalarError",
    "SynthesisError",
    "TSegment",
    "VPolytope",
    "affine_equivalence",
    "affine_independent",
    "bary_op",
    "caratheodory",
    "check_laws",
    "check_satisfaction",
    "division_point_relations",
    "eval_term",
    "extend_to_basis",
    "format_formula",
    "format_rational",
    "format_term",
    "formula_from_json",
    "formula_to_json",
    "hexagon_relation_check",
    "hull_member_Q",
    "hull_member_T",
    "implicit_equalities",
    "interval_member",
    "iso_decide",
    "lp_extremum",
    "lp_feasible",
    "map_from_correspondence",
    "max_independent_subset",
    "membership_in_convex",
    "membership_report_Q",
    "membership_report_T",
    "parse_rational",
    "parse_term",
    "prime_valuation",
    "q_convexity_probe",
    "relative_interior_point",
    "ring_contains",
    "ring_lines_through",
    "rref",
    "segment_closure_bounded",
    "smallest_inverted_prime",
    "smith_normal_form",
    "solve_affine",
    "synth_phi",
    "t_segment_points",
    "term_coefficients",
    "verify_farkas_certificate",
    "verify_phi",
]
