"""Synthesis of existential chain formulas for affine combinations.

For rational coefficients xi_0..xi_k summing to 1 and a coefficient ring,
synth_phi builds a conjunction of bindings and three-variable relations
u_a u_b (1/p) = u_c, with p the smallest inverted prime, such that for all
points a_0..a_k, b: the formula is satisfiable with x_i = a_i, y = b
exactly when b = sum(xi_i * a_i).

Two-coefficient instances become a single chain of equally spaced points on
the line through the two inputs: with xi_1 = u/v rescaled to u'/v' so that
v' exceeds p, variable u_i sits at position i/v', inputs bind positions 0
and v', the output binds position u', and the relations force the spacing.
Longer instances split the index set by coefficient sign and recurse, the
partial sums combining through one more two-point chain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .hull import hull_member_Q, hull_member_T
from .mode import Point, as_point
from .scalar import (
    RingSpec,
    format_rational,
    interval_member,
    parse_rational,
    smallest_inverted_prime,
)


class FormulaError(ValueError):
    pass


class SynthesisError(FormulaError):
    """Chain layout failed to reach a uniquely solvable square system."""


MAX_RANGE_EXTENSIONS = 3


@dataclass(frozen=True)
class Relation:
    """The atom u_left u_right (param) = u_result."""

    left: int
    right: int
    param: Fraction
    result: int


@dataclass(frozen=True)
class SynthNode:
    """Recursion tree of a synthesized formula (for inspection and reports)."""

    kind: str  # "identity" | "chain" | "split"
    coeffs: tuple[Fraction, ...]
    children: tuple["SynthNode", ...] = ()
    variable: int = -1
    scaled: tuple[int, int] = (0, 0)  # chain: (scaled numerator, denominator)
    span: tuple[int, int] = (0, 0)  # chain: position range
    position_vars: tuple[int, ...] = ()  # chain: variable index per position


@dataclass(frozen=True)
class ChainFormula:
    """Flattened existential formula: bindings plus chain relations.

    input_bindings are (variable, input index) pairs meaning u_var = x_j;
    output_var is the variable bound to y.  Every relation parameter lies in
    the open unit interval of the ring the formula was built for.
    """

    arity: int
    num_vars: int
    input_bindings: tuple[tuple[int, int], ...]
    output_var: int
    relations: tuple[Relation, ...]
    structure: Optional[SynthNode] = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# Shared exact solver for the affine constraint systems
# ---------------------------------------------------------------------------


def _solve_equations(num_vars: int, equations, veclen: int):
    """Solve a sparse exact linear system whose unknowns are vectors.

    equations: (dict variable -> coefficient, rhs vector) pairs.  Returns
    (values, free_variables) or None when inconsistent; free variables are
    assigned the zero vector.
    """
    zero = tuple([Fraction(0)] * veclen)
    pivots: dict[int, tuple[dict, tuple]] = {}
    order: list[int] = []
    for row_in, rhs in equations:
        row = {c: Fraction(v) for c, v in row_in.items() if v != 0}
        rhs = tuple(Fraction(x) for x in rhs)
        while True:
            piv = next((c for c in sorted(row) if c in pivots), None)
            if piv is None:
                break
            f = row.pop(piv)
            prow, prhs = pivots[piv]
            for c, v in prow.items():
                if c == piv:
                    continue
                nv = row.get(c, Fraction(0)) - f * v
                if nv == 0:
                    row.pop(c, None)
                else:
                    row[c] = nv
            rhs = tuple(a - f * b for a, b in zip(rhs, prhs))
        if not row:
            if any(x != 0 for x in rhs):
                return None
            continue
        col = min(row)
        inv = Fraction(1) / row[col]
        pivots[col] = ({c: v * inv for c, v in row.items()}, tuple(x * inv for x in rhs))
        order.append(col)
    free = [v for v in range(num_vars) if v not in pivots]
    values: dict[int, tuple] = {v: zero for v in free}
    for col in reversed(order):
        prow, prhs = pivots[col]
        acc = list(prhs)
        for c, v in prow.items():
            if c == col:
                continue
            other = values[c]
            for i in range(veclen):
                acc[i] -= v * other[i]
        values[col] = tuple(acc)
    return values, free


def _relation_equations(relations: Sequence[Relation]):
    out = []
    for rel in relations:
        row: dict[int, Fraction] = {}
        for var, coef in ((rel.left, 1 - rel.param), (rel.right, rel.param), (rel.result, Fraction(-1))):
            row[var] = row.get(var, Fraction(0)) + coef
        out.append((row, None))
    return out


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------


class _Alloc:
    def __init__(self):
        self.count = 0

    def fresh(self) -> int:
        v = self.count
        self.count += 1
        return v


def _chain_layout(xi1: Fraction, p: int, ext: int):
    u, v = xi1.numerator, xi1.denominator
    c = 1
    while c * v <= p:
        c += 1
    u_s, v_s = c * u, c * v
    bottom = min(0, u_s)
    top = max(v_s, u_s) + ext
    return u_s, v_s, bottom, top


def _build_chain(
    xi1: Fraction,
    p: int,
    alloc: _Alloc,
    relations: list[Relation],
    in0: Optional[int],
    in1: Optional[int],
):
    """Lay out one equally spaced chain realizing y = (1-xi1) x0 + xi1 x1.

    Forward relations step the chain upward; reversed relations are added
    from the top index downward until the system in the unknowns is square.
    If the square system is singular or unreachable, the range is extended
    one position at a time, at most MAX_RANGE_EXTENSIONS times.
    """
    if xi1 == 0 or xi1 == 1:
        raise FormulaError("chain coefficient must avoid 0 and 1")
    param = Fraction(1, p)
    failures = []
    for ext in range(MAX_RANGE_EXTENSIONS + 1):
        u_s, v_s, bottom, top = _chain_layout(xi1, p, ext)
        npos = top - bottom + 1
        unknowns = npos - 2
        forward = [(i, i + p, i + 1) for i in range(bottom, top - p + 1)]
        needed = unknowns - len(forward)
        reversed_rels = []
        j = top
        while len(reversed_rels) < needed and j - p >= bottom:
            reversed_rels.append((j, j - p, j - 1))
            j -= 1
        if len(reversed_rels) < needed:
            failures.append(f"range [{bottom},{top}]: not enough relations")
            continue
        trial = _Alloc()
        trial.count = alloc.count
        var_at: dict[int, int] = {}
        for pos in range(bottom, top + 1):
            if pos == 0 and in0 is not None:
                var_at[pos] = in0
            elif pos == v_s and in1 is not None:
                var_at[pos] = in1
            else:
                var_at[pos] = trial.fresh()
        rels = [
            Relation(var_at[a], var_at[b], param, var_at[r])
            for a, b, r in forward + reversed_rels
        ]
        # unique solvability given the two bound positions, checked exactly
        equations = [({var_at[0]: Fraction(1)}, (Fraction(1), Fraction(0))),
                     ({var_at[v_s]: Fraction(1)}, (Fraction(0), Fraction(1)))]
        equations += [(row, (Fraction(0), Fraction(0))) for row, _ in _relation_equations(rels)]
        involved = sorted({var_at[pos] for pos in var_at})
        remap = {v: i for i, v in enumerate(involved)}
        local = [({remap[c]: f for c, f in row.items()}, rhs) for row, rhs in equations]
        solved = _solve_equations(len(involved), local, 2)
        if solved is None or solved[1]:
            failures.append(f"range [{bottom},{top}]: singular system")
            continue
        values, _ = solved
        out = values[remap[var_at[u_s]]]
        assert out == (1 - xi1, xi1)
        alloc.count = trial.count
        relations.extend(rels)
        node = SynthNode(
            kind="chain",
            coeffs=(1 - xi1, xi1),
            scaled=(u_s, v_s),
            span=(bottom, top),
            position_vars=tuple(var_at[pos] for pos in range(bottom, top + 1)),
        )
        return var_at[0], var_at[v_s], var_at[u_s], node
    raise SynthesisError(
        f"no uniquely solvable chain for coefficient {xi1} with prime {p}: "
        + "; ".join(failures)
    )


def _build(pairs, p, alloc, relations, bindings):
    """pairs: nonzero (input index, coefficient); returns (output var, node)."""
    if len(pairs) == 1:
        idx, coeff = pairs[0]
        assert coeff == 1
        var = alloc.fresh()
        bindings.append((var, idx))
        return var, SynthNode(kind="identity", coeffs=(Fraction(1),), variable=var)
    if len(pairs) == 2:
        (i0, c0), (i1, c1) = pairs
        v0, v1, out, node = _build_chain(c1, p, alloc, relations, None, None)
        bindings.append((v0, i0))
        bindings.append((v1, i1))
        return out, node
    negatives = [pair for pair in pairs if pair[1] < 0]
    group_a = negatives if negatives else [pairs[0]]
    group_b = [pair for pair in pairs if pair not in group_a]
    k0 = sum((c for _, c in group_a), Fraction(0))
    k1 = sum((c for _, c in group_b), Fraction(0))
    out_a, node_a = _build(
        [(i, c / k0) for i, c in group_a], p, alloc, relations, bindings
    )
    out_b, node_b = _build(
        [(i, c / k1) for i, c in group_b], p, alloc, relations, bindings
    )
    _, _, out, pair_node = _build_chain(k1, p, alloc, relations, out_a, out_b)
    node = SynthNode(
        kind="split",
        coeffs=tuple(c for _, c in pairs),
        children=(node_a, node_b, pair_node),
    )
    return out, node


def synth_phi(xi: Sequence, ring: RingSpec) -> ChainFormula:
    """Existential chain formula whose models are exactly y = sum(xi_i x_i)."""
    coeffs = [Fraction(c) for c in xi]
    if not coeffs:
        raise FormulaError("need at least one coefficient")
    if sum(coeffs) != 1:
        raise FormulaError("coefficients must sum to exactly 1")
    p = smallest_inverted_prime(ring)
    pairs = [(i, c) for i, c in enumerate(coeffs) if c != 0]
    alloc = _Alloc()
    relations: list[Relation] = []
    bindings: list[tuple[int, int]] = []
    out, node = _build(pairs, p, alloc, relations, bindings)
    phi = ChainFormula(
        arity=len(coeffs),
        num_vars=alloc.count,
        input_bindings=tuple(bindings),
        output_var=out,
        relations=tuple(relations),
        structure=node,
    )
    assert all(interval_member(r.param, ring, True) for r in phi.relations)
    return phi


# ---------------------------------------------------------------------------
# Verification and satisfaction
# ---------------------------------------------------------------------------


def _symbolic_rows(phi: ChainFormula):
    k = phi.arity
    eqs = []
    for var, j in phi.input_bindings:
        unit = tuple(Fraction(int(t == j)) for t in range(k))
        eqs.append(({var: Fraction(1)}, unit))
    zero = tuple([Fraction(0)] * k)
    eqs += [(row, zero) for row, _ in _relation_equations(phi.relations)]
    return eqs


def verify_phi(phi: ChainFormula, xi: Sequence) -> bool:
    """Re-solve the constraint system symbolically and compare with xi.

    True iff the bindings and relations determine every existential variable
    uniquely from x_0..x_k and the solved output equals sum(xi_i x_i)
    identically.
    """
    coeffs = tuple(Fraction(c) for c in xi)
    if len(coeffs) != phi.arity:
        raise FormulaError("coefficient count does not match formula arity")
    solved = _solve_equations(phi.num_vars, _symbolic_rows(phi), phi.arity)
    if solved is None:
        return False
    values, free = solved
    if free:
        return False
    return values[phi.output_var] == coeffs


def solved_coefficients(phi: ChainFormula) -> Optional[dict[int, tuple[Fraction, ...]]]:
    """Each existential variable as an affine combination of the inputs."""
    solved = _solve_equations(phi.num_vars, _symbolic_rows(phi), phi.arity)
    if solved is None or solved[1]:
        return None
    return solved[0]


def check_satisfaction(
    phi: ChainFormula, points: Sequence[Sequence], b: Sequence
) -> Optional[dict[int, Point]]:
    """Witness assignment for the existential variables, or None.

    All relations are affine, so satisfaction reduces to exact consistency
    of a linear system; by construction this holds exactly when
    b = sum(xi_i * points_i) for the coefficients the formula encodes.
    """
    pts = [as_point(q) for q in points]
    target = as_point(b)
    if len(pts) != phi.arity:
        raise FormulaError("point count does not match formula arity")
    dim = len(target)
    if any(len(q) != dim for q in pts):
        raise FormulaError("inconsistent point dimensions")
    eqs = [({var: Fraction(1)}, pts[j]) for var, j in phi.input_bindings]
    zero = tuple([Fraction(0)] * dim)
    eqs += [(row, zero) for row, _ in _relation_equations(phi.relations)]
    eqs.append(({phi.output_var: Fraction(1)}, target))
    solved = _solve_equations(phi.num_vars, eqs, dim)
    if solved is None:
        return None
    values, _ = solved
    return {v: tuple(values[v]) for v in range(phi.num_vars)}


def membership_in_convex(
    phi: ChainFormula,
    points: Sequence[Sequence],
    b: Sequence,
    generators: Sequence[Sequence],
    ring: RingSpec,
) -> bool:
    """Satisfaction with every witness point staying inside the rational hull.

    Requires the bound points and b to lie in the ring hull of the
    generators; returns False when that precondition fails, when the formula
    is unsatisfiable, or when some solved variable escapes the rational hull.
    """
    for q in list(points) + [b]:
        if hull_member_T(q, generators, ring) is None:
            return False
    witness = check_satisfaction(phi, points, b)
    if witness is None:
        return False
    return all(hull_member_Q(w, generators) is not None for w in witness.values())


# ---------------------------------------------------------------------------
# Rendering and JSON
# ---------------------------------------------------------------------------


def format_formula(phi: ChainFormula) -> str:
    """Existential-conjunction rendering, e.g. (∃u0)…(x0 = u0 & … & y = u6)."""
    quantifiers = "".join(f"(∃u{i})" for i in range(phi.num_vars))
    atoms = [f"x{j} = u{var}" for var, j in phi.input_bindings]
    atoms += [
        f"u{r.left} u{r.right} {format_rational(r.param)} = u{r.result}"
        for r in phi.relations
    ]
    atoms.append(f"y = u{phi.output_var}")
    return f"{quantifiers}({' & '.join(atoms)})"


def _node_to_json(node: SynthNode):
    data = {"kind": node.kind, "coeffs": [format_rational(c) for c in node.coeffs]}
    if node.kind == "identity":
        data["variable"] = node.variable
    elif node.kind == "chain":
        data["scaled"] = list(node.scaled)
        data["span"] = list(node.span)
        data["position_vars"] = list(node.position_vars)
    else:
        data["children"] = [_node_to_json(c) for c in node.children]
    return data


def _node_from_json(data) -> SynthNode:
    coeffs = tuple(parse_rational(c) for c in data["coeffs"])
    kind = data["kind"]
    if kind == "identity":
        return SynthNode(kind=kind, coeffs=coeffs, variable=data["variable"])
    if kind == "chain":
        return SynthNode(
            kind=kind,
            coeffs=coeffs,
            scaled=tuple(data["scaled"]),
            span=tuple(data["span"]),
            position_vars=tuple(data["position_vars"]),
        )
    return SynthNode(
        kind=kind,
        coeffs=coeffs,
        children=tuple(_node_from_json(c) for c in data["children"]),
    )


def formula_to_json(phi: ChainFormula) -> str:
    data = {
        "arity": phi.arity,
        "variables": phi.num_vars,
        "inputs": [[var, j] for var, j in phi.input_bindings],
        "output": phi.output_var,
        "relations": [
            [r.left, r.right, format_rational(r.param), r.result] for r in phi.relations
        ],
    }
    if phi.structure is not None:
        data["structure"] = _node_to_json(phi.structure)
    return json.dumps(data)


def formula_from_json(text: str) -> ChainFormula:
    try:
        data = json.loads(text)
        structure = (
            _node_from_json(data["structure"]) if "structure" in data else None
        )
        return ChainFormula(
            arity=int(data["arity"]),
            num_vars=int(data["variables"]),
            input_bindings=tuple((int(v), int(j)) for v, j in data["inputs"]),
            output_var=int(data["output"]),
            relations=tuple(
                Relation(int(a), int(b), parse_rational(q), int(r))
                for a, b, q, r in data["relations"]
            ),
            structure=structure,
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise FormulaError(f"invalid formula JSON: {exc}") from exc
