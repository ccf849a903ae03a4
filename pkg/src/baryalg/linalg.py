"""Exact linear algebra over the rationals and integers.

Everything here is bit-exact: reduced row echelon form, affine system
solving, Smith normal form with unimodular transforms, and exact linear
feasibility with witnesses and Farkas certificates.  Feasibility uses
Fourier-Motzkin elimination up to FM_VARIABLE_LIMIT variables and a
Bland-rule simplex above that; both paths produce the same kind of
witness/certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

QVector = list[Fraction]
QMatrix = list[list[Fraction]]

FM_VARIABLE_LIMIT = 8


class LinalgError(ValueError):
    pass


class InfeasibleSystemError(LinalgError):
    """Raised when an operation requires a feasible constraint system."""


def _frac_matrix(matrix: Sequence[Sequence]) -> QMatrix:
    rows = [[Fraction(x) for x in row] for row in matrix]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise LinalgError("ragged matrix")
    return rows


def _frac_vector(vec: Sequence) -> QVector:
    return [Fraction(x) for x in vec]


def identity_matrix(n: int) -> QMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> QMatrix:
    a, b = _frac_matrix(a), _frac_matrix(b)
    if a and b and len(a[0]) != len(b):
        raise LinalgError("dimension mismatch in product")
    cols = len(b[0]) if b else 0
    return [
        [sum((ra[k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(cols)]
        for ra in a
    ]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> QVector:
    a, v = _frac_matrix(a), _frac_vector(v)
    if a and len(a[0]) != len(v):
        raise LinalgError("dimension mismatch in product")
    return [sum((row[k] * v[k] for k in range(len(v))), Fraction(0)) for row in a]


def rref(matrix: Sequence[Sequence]) -> tuple[QMatrix, list[int], int]:
    """Reduced row echelon form; returns (R, pivot columns, rank)."""
    m = _frac_matrix(matrix)
    if not m:
        return [], [], 0
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot_row = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nrows):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    return m, pivots, len(pivots)


def rank(matrix: Sequence[Sequence]) -> int:
    return rref(matrix)[2]


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = _frac_matrix(matrix)
    n = len(m)
    if any(len(r) != n for r in m):
        raise LinalgError("determinant needs a square matrix")
    det = Fraction(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def solve_affine(
    matrix: Sequence[Sequence], rhs: Sequence
) -> Optional[tuple[QVector, list[QVector]]]:
    """Full exact solution set of M x = b.

    Returns (particular solution, kernel basis), or None when the system is
    inconsistent.  Free variables are set to zero in the particular solution.
    """
    m = _frac_matrix(matrix)
    b = _frac_vector(rhs)
    if len(m) != len(b):
        raise LinalgError("rhs length does not match row count")
    ncols = len(m[0]) if m else 0
    augmented = [row + [bv] for row, bv in zip(m, b)]
    red, pivots, _ = rref(augmented)
    if ncols in pivots:
        return None
    particular = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        particular[col] = red[r][ncols]
    free_cols = [c for c in range(ncols) if c not in pivots]
    kernel: list[QVector] = []
    for f in free_cols:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -red[r][f]
        kernel.append(vec)
    return particular, kernel


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def smith_normal_form(
    matrix: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form of an integer matrix.

    Returns (U, D, V) with U @ M @ V == D, U and V unimodular, and D diagonal
    with nonnegative entries satisfying d1 | d2 | ...
    """
    a = [[int(x) for x in row] for row in matrix]
    for row, orig in zip(a, matrix):
        for x, y in zip(row, orig):
            if x != y:
                raise LinalgError("Smith normal form needs integer entries")
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, factor):
        a[dst] = [x + factor * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + factor * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, factor):
        for row in a:
            row[dst] += factor * row[src]
        for row in v:
            row[dst] += factor * row[src]

    t = 0
    while True:
        entries = [
            (abs(a[i][j]), i, j)
            for i in range(t, nrows)
            for j in range(t, ncols)
            if a[i][j] != 0
        ]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            # shrink the pivot until it divides its whole row and column
            changed = False
            for r in range(t + 1, nrows):
                if a[r][t] != 0:
                    q = a[r][t] // a[t][t]
                    add_row(r, t, -q)
                    if a[r][t] != 0:
                        swap_rows(t, r)
                        changed = True
            for c in range(t + 1, ncols):
                if a[t][c] != 0:
                    q = a[t][c] // a[t][t]
                    add_col(c, t, -q)
                    if a[t][c] != 0:
                        swap_cols(t, c)
                        changed = True
            if not changed:
                break
        offender = next(
            (
                (r, c)
                for r in range(t + 1, nrows)
                for c in range(t + 1, ncols)
                if a[r][c] % a[t][t] != 0
            ),
            None,
        )
        if offender is not None:
            add_row(t, offender[0], 1)
            continue
        t += 1
    for i in range(min(nrows, ncols)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    return u, a, v


# ---------------------------------------------------------------------------
# Exact linear feasibility with witnesses and certificates
# ---------------------------------------------------------------------------


RELATIONS = ("<=", ">=", "==")


@dataclass(frozen=True)
class LinearConstraint:
    """An exact constraint sum(coeffs * x) rel rhs with rel in {<=, >=, ==}."""

    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def __init__(self, coeffs: Sequence, rel: str, rhs):
        if rel not in RELATIONS:
            raise LinalgError(f"unknown relation {rel!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "rhs", Fraction(rhs))

    def oriented(self) -> tuple[tuple[Fraction, ...], Fraction]:
        """The constraint as (a, b) meaning a.x <= b; >= rows are negated."""
        if self.rel == ">=":
            return tuple(-c for c in self.coeffs), -self.rhs
        return self.coeffs, self.rhs

    def satisfied_by(self, point: Sequence) -> bool:
        value = sum((c * Fraction(x) for c, x in zip(self.coeffs, point)), Fraction(0))
        if self.rel == "<=":
            return value <= self.rhs
        if self.rel == ">=":
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LPResult:
    """Outcome of an exact feasibility test.

    On success `witness` satisfies every constraint exactly.  On failure
    `certificate` holds one multiplier per constraint: multipliers are
    nonnegative for inequalities (applied to the <= orientation, so a >= row
    is first negated) and unrestricted for equalities, and combining the
    oriented rows with these multipliers yields 0 <= negative.
    """

    feasible: bool
    witness: Optional[tuple[Fraction, ...]]
    certificate: Optional[tuple[Fraction, ...]]


def verify_farkas_certificate(
    constraints: Sequence[LinearConstraint], certificate: Sequence
) -> bool:
    """Check that the multipliers re-derive an exact contradiction 0 <= c < 0."""
    cert = _frac_vector(certificate)
    if len(cert) != len(constraints):
        return False
    num_vars = len(constraints[0].coeffs) if constraints else 0
    combo = [Fraction(0)] * num_vars
    total = Fraction(0)
    for lam, con in zip(cert, constraints):
        if con.rel != "==" and lam < 0:
            return False
        a, b = con.oriented()
        combo = [acc + lam * c for acc, c in zip(combo, a)]
        total += lam * b
    return all(c == 0 for c in combo) and total < 0


class _Row:
    """A row during elimination, with multipliers over the original list.

    Inequality-derived rows mean coeffs . x <= rhs and keep nonnegative
    multipliers on inequality constraints; equality-derived rows mean
    coeffs . x == rhs and may carry any multipliers on equality constraints.
    """

    __slots__ = ("coeffs", "rhs", "mult")

    def __init__(self, coeffs, rhs, mult):
        self.coeffs = coeffs
        self.rhs = rhs
        self.mult = mult

    def minus(self, factor, other):
        return _Row(
            [a - factor * b for a, b in zip(self.coeffs, other.coeffs)],
            self.rhs - factor * other.rhs,
            [a - factor * b for a, b in zip(self.mult, other.mult)],
        )


def _split_rows(constraints: Sequence[LinearConstraint], num_vars: int):
    n = len(constraints)
    equalities, inequalities = [], []
    for i, con in enumerate(constraints):
        if len(con.coeffs) != num_vars:
            raise LinalgError("constraint arity mismatch")
        a, b = con.oriented()
        mult = [Fraction(int(j == i)) for j in range(n)]
        row = _Row(list(a), b, mult)
        (equalities if con.rel == "==" else inequalities).append(row)
    return equalities, inequalities


def _gauss_substitute(equalities, inequalities, protect=()):
    """Eliminate variables through the equality rows.

    Returns (substitutions, residual equalities over protected variables,
    reduced inequalities, infeasible_row).  Substitution rows are normalized
    to coefficient 1 on their variable and reduced against earlier ones, so
    applying them in order removes every eliminated variable.
    """
    substitutions: list[tuple[int, _Row]] = []
    residual: list[_Row] = []
    for row in equalities:
        for var, sub in substitutions:
            if row.coeffs[var] != 0:
                row = row.minus(row.coeffs[var], sub)
        var = next(
            (
                j
                for j, c in enumerate(row.coeffs)
                if c != 0 and j not in protect
            ),
            None,
        )
        if var is None:
            if any(c != 0 for c in row.coeffs):
                residual.append(row)
            elif row.rhs != 0:
                if row.rhs > 0:  # negate: purely equality-derived, signs are free
                    row = _Row(
                        [-c for c in row.coeffs],
                        -row.rhs,
                        [-m for m in row.mult],
                    )
                return substitutions, residual, [], row
            continue
        inv = Fraction(1) / row.coeffs[var]
        row = _Row(
            [c * inv for c in row.coeffs],
            row.rhs * inv,
            [m * inv for m in row.mult],
        )
        substitutions.append((var, row))
    reduced = []
    for row in inequalities:
        for var, sub in substitutions:
            if row.coeffs[var] != 0:
                row = row.minus(row.coeffs[var], sub)
        reduced.append(row)
    return substitutions, residual, reduced, None


def _fm_eliminate(rows: list[_Row], variables: Sequence[int]):
    """Fourier-Motzkin elimination of the given variables, in order.

    Returns (stages, final_rows, bad_row): stages pair each variable with the
    row list it was eliminated from; bad_row is a constant row with negative
    rhs when infeasibility is detected early, else None.
    """
    stages = []
    for var in variables:
        stages.append((var, rows))
        keep: dict[tuple, _Row] = {}
        bad = None

        def push(row: _Row):
            if all(c == 0 for c in row.coeffs):
                return row if row.rhs < 0 else None
            scale = Fraction(1) / abs(next(c for c in row.coeffs if c != 0))
            key = tuple(c * scale for c in row.coeffs)
            scaled = _Row(list(key), row.rhs * scale, [m * scale for m in row.mult])
            old = keep.get(key)
            if old is None or scaled.rhs < old.rhs:
                keep[key] = scaled
            return None

        negatives = [r for r in rows if r.coeffs[var] < 0]
        for r in rows:
            if r.coeffs[var] == 0:
                bad = push(r)
                if bad:
                    return stages, [], bad
        for p in rows:
            cp = p.coeffs[var]
            if cp <= 0:
                continue
            for q in negatives:
                cq = -q.coeffs[var]
                coeffs = [a / cp + b / cq for a, b in zip(p.coeffs, q.coeffs)]
                rhs = p.rhs / cp + q.rhs / cq
                mult = [a / cp + b / cq for a, b in zip(p.mult, q.mult)]
                bad = push(_Row(coeffs, rhs, mult))
                if bad:
                    return stages, [], bad
        rows = list(keep.values())
    return stages, rows, None


def _evaluate_rest(row, var, values):
    rest = Fraction(0)
    for j, val in values.items():
        if j != var and row.coeffs[j] != 0:
            rest += row.coeffs[j] * val
    return rest


def _fm_back_substitute(stages, values: dict[int, Fraction]):
    """Assign the FM-eliminated variables, newest stage first."""
    for var, rows in reversed(stages):
        lo = hi = None
        for row in rows:
            c = row.coeffs[var]
            if c == 0:
                continue
            bound = (row.rhs - _evaluate_rest(row, var, values)) / c
            if c > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if lo is not None and hi is not None:
            values[var] = (lo + hi) / 2
        elif lo is not None:
            values[var] = lo
        elif hi is not None:
            values[var] = hi
        else:
            values[var] = Fraction(0)
    return values


def _apply_substitutions(substitutions, values):
    """Assign equality-eliminated variables, newest substitution first."""
    for var, row in reversed(substitutions):
        values[var] = row.rhs - _evaluate_rest(row, var, values)
    return values


def _fm_feasible(constraints, num_vars) -> LPResult:
    equalities, inequalities = _split_rows(constraints, num_vars)
    substitutions, residual, reduced, bad = _gauss_substitute(
        equalities, inequalities
    )
    assert not residual  # nothing is protected here
    if bad is not None:
        return LPResult(False, None, tuple(bad.mult))
    remaining = [v for v in range(num_vars) if v not in dict(substitutions)]
    stages, final, bad = _fm_eliminate(reduced, remaining)
    if bad is None:
        bad = next((r for r in final if r.rhs < 0), None)
    if bad is not None:
        return LPResult(False, None, tuple(bad.mult))
    values = _fm_back_substitute(stages, {})
    _apply_substitutions(substitutions, values)
    witness = tuple(values[j] for j in range(num_vars))
    return LPResult(True, witness, None)


# -- Bland-rule simplex ------------------------------------------------------


def _doubled_rows(constraints: Sequence[LinearConstraint], num_vars: int):
    """All constraints as <= rows (equalities doubled), with fold-back info."""
    rows: list[tuple[tuple[Fraction, ...], Fraction]] = []
    fold: list[tuple[int, int]] = []
    for idx, con in enumerate(constraints):
        if len(con.coeffs) != num_vars:
            raise LinalgError("constraint arity mismatch")
        a, b = con.oriented()
        rows.append((a, b))
        fold.append((idx, 1))
        if con.rel == "==":
            rows.append((tuple(-c for c in a), -b))
            fold.append((idx, -1))
    return rows, fold


def _fold_certificate(mult, fold, n_constraints):
    cert = [Fraction(0)] * n_constraints
    for m, (idx, sign) in zip(mult, fold):
        cert[idx] += sign * m
    return tuple(cert)


class _Simplex:
    """Exact primal simplex on split variables x = u - w with artificials.

    Column layout: u (num_vars), w (num_vars), slacks (one per <= row),
    artificials (one per row, initial basis).  Bland's rule prevents cycling.
    """

    def __init__(self, raw_rows, num_vars):
        self.num_vars = num_vars
        self.nrows = len(raw_rows)
        self.slack_at = 2 * num_vars
        self.art_at = self.slack_at + self.nrows
        self.ncols = self.art_at + self.nrows
        self.sigma = []
        self.tableau = []
        for i, (coeffs, rhs) in enumerate(raw_rows):
            sigma = Fraction(-1 if rhs < 0 else 1)
            self.sigma.append(sigma)
            row = [Fraction(0)] * (self.ncols + 1)
            for j, c in enumerate(coeffs):
                row[j] = sigma * c
                row[num_vars + j] = -sigma * c
            row[self.slack_at + i] = sigma
            row[self.art_at + i] = Fraction(1)
            row[-1] = sigma * rhs
            self.tableau.append(row)
        self.basis = [self.art_at + i for i in range(self.nrows)]

    def _pivot(self, r, c, obj):
        row = self.tableau[r]
        inv = Fraction(1) / row[c]
        self.tableau[r] = row = [x * inv for x in row]
        for i, other in enumerate(self.tableau):
            if i != r and other[c] != 0:
                f = other[c]
                self.tableau[i] = [a - f * b for a, b in zip(other, row)]
        if obj[c] != 0:
            f = obj[c]
            obj[:] = [a - f * b for a, b in zip(obj, row)]
        self.basis[r] = c

    def _bland(self, obj, allowed_cols):
        while True:
            entering = next((j for j in allowed_cols if obj[j] < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.tableau):
                coef = row[entering]
                if coef > 0:
                    ratio = row[-1] / coef
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self._pivot(best[1], entering, obj)

    def phase1(self):
        obj = [Fraction(0)] * (self.ncols + 1)
        for j in range(self.ncols + 1):
            obj[j] = -sum(row[j] for row in self.tableau)
        for i in range(self.nrows):
            obj[self.art_at + i] += 1
        status = self._bland(obj, range(self.ncols))
        assert status == "optimal"  # phase-1 objective is bounded below by 0
        self.phase1_obj = obj
        return -obj[-1]

    def infeasibility_multipliers(self):
        # y_i = 1 - reduced cost of artificial i; mu = -y * sigma >= 0
        mu = []
        for i in range(self.nrows):
            y = Fraction(1) - self.phase1_obj[self.art_at + i]
            m = -y * self.sigma[i]
            assert m >= 0
            mu.append(m)
        return mu

    def drop_artificials(self):
        for r in range(self.nrows):
            if self.basis[r] < self.art_at:
                continue
            col = next(
                (j for j in range(self.art_at) if self.tableau[r][j] != 0), None
            )
            if col is not None:
                dummy = [Fraction(0)] * (self.ncols + 1)
                self._pivot(r, col, dummy)
        keep = [r for r in range(self.nrows) if self.basis[r] < self.art_at]
        self.tableau = [self.tableau[r] for r in keep]
        self.basis = [self.basis[r] for r in keep]
        self.nrows = len(keep)

    def phase2(self, objective):
        # minimize objective . x
        costs = [Fraction(0)] * (self.ncols + 1)
        for j, c in enumerate(objective):
            costs[j] = Fraction(c)
            costs[self.num_vars + j] = -Fraction(c)
        obj = list(costs)
        for r, b in enumerate(self.basis):
            if costs[b] != 0:
                f = costs[b]
                obj = [a - f * t for a, t in zip(obj, self.tableau[r])]
        return self._bland(obj, range(self.art_at))

    def witness(self):
        values = {b: self.tableau[r][-1] for r, b in enumerate(self.basis)}
        return tuple(
            values.get(j, Fraction(0)) - values.get(self.num_vars + j, Fraction(0))
            for j in range(self.num_vars)
        )


def _simplex_feasible(constraints, num_vars) -> LPResult:
    raw, fold = _doubled_rows(constraints, num_vars)
    sx = _Simplex(raw, num_vars)
    if sx.phase1() > 0:
        mu = sx.infeasibility_multipliers()
        return LPResult(False, None, _fold_certificate(mu, fold, len(constraints)))
    return LPResult(True, sx.witness(), None)


def lp_feasible(
    constraints: Sequence[LinearConstraint], num_vars: Optional[int] = None
) -> LPResult:
    """Exact feasibility of a finite rational constraint system.

    Feasible systems yield an exact rational witness; infeasible ones yield a
    Farkas certificate checkable by verify_farkas_certificate.
    """
    constraints = list(constraints)
    if num_vars is None:
        if not constraints:
            raise LinalgError("num_vars required for an empty system")
        num_vars = len(constraints[0].coeffs)
    if not constraints:
        return LPResult(True, tuple([Fraction(0)] * num_vars), None)
    if num_vars <= FM_VARIABLE_LIMIT:
        return _fm_feasible(constraints, num_vars)
    return _simplex_feasible(constraints, num_vars)


def lp_extremum(
    constraints: Sequence[LinearConstraint],
    objective: Sequence,
    maximize: bool,
) -> tuple[str, Optional[Fraction], Optional[tuple[Fraction, ...]]]:
    """Exact optimum of a linear objective: (status, value, witness).

    Status is one of "infeasible", "unbounded", "optimal"; witness attains
    the optimum exactly when status is "optimal".
    """
    constraints = list(constraints)
    objective = _frac_vector(objective)
    num_vars = len(objective)
    feas = lp_feasible(constraints, num_vars)
    if not feas.feasible:
        return "infeasible", None, None
    if num_vars <= FM_VARIABLE_LIMIT:
        return _fm_extremum(constraints, objective, maximize)
    sign = Fraction(-1 if maximize else 1)
    raw, _ = _doubled_rows(constraints, num_vars)
    sx = _Simplex(raw, num_vars)
    sx.phase1()
    sx.drop_artificials()
    status = sx.phase2([sign * c for c in objective])
    if status == "unbounded":
        return "unbounded", None, None
    witness = sx.witness()
    value = sum((c * x for c, x in zip(objective, witness)), Fraction(0))
    return "optimal", value, witness


def _fm_extremum(constraints, objective, maximize):
    num_vars = len(objective)
    z = num_vars  # fresh variable pinned to the objective value
    extended = [
        LinearConstraint(list(con.coeffs) + [0], con.rel, con.rhs)
        for con in constraints
    ]
    extended.append(
        LinearConstraint([-c for c in objective] + [Fraction(1)], "==", 0)
    )
    equalities, inequalities = _split_rows(extended, num_vars + 1)
    substitutions, residual, reduced, bad = _gauss_substitute(
        equalities, inequalities, protect={z}
    )
    if bad is not None:
        return "infeasible", None, None
    remaining = [v for v in range(num_vars) if v not in dict(substitutions)]
    stages, final, bad = _fm_eliminate(reduced, remaining)
    if bad is not None:
        return "infeasible", None, None
    lo = hi = None
    for row in final:
        c = row.coeffs[z]
        if c == 0:
            if row.rhs < 0:
                return "infeasible", None, None
            continue
        bound = row.rhs / c
        if c > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = bound if lo is None else max(lo, bound)
    for row in residual:  # equalities pinning z directly
        c = row.coeffs[z]
        if c == 0:
            if row.rhs != 0:
                return "infeasible", None, None
            continue
        pinned = row.rhs / c
        lo = pinned if lo is None else max(lo, pinned)
        hi = pinned if hi is None else min(hi, pinned)
    if lo is not None and hi is not None and lo > hi:
        return "infeasible", None, None
    value = hi if maximize else lo
    if value is None:
        return "unbounded", None, None
    values = _fm_back_substitute(stages, {z: value})
    _apply_substitutions(substitutions, values)
    witness = tuple(values[j] for j in range(num_vars))
    return "optimal", value, witness


# -- Implicit equalities and relative interior -------------------------------


def _slack_extremum(constraints, index):
    """Largest slack the feasible set allows on inequality `index`."""
    con = constraints[index]
    a, b = con.oriented()
    # slack = b - a.x >= 0 on the feasible set; maximize it
    status, value, _ = lp_extremum(constraints, [-c for c in a], True)
    if status == "infeasible":
        raise InfeasibleSystemError("constraint system is infeasible")
    if status == "unbounded":
        return None
    return value + b


def _tighten(con: LinearConstraint, margin: Fraction) -> LinearConstraint:
    if con.rel == "<=":
        return LinearConstraint(con.coeffs, "<=", con.rhs - margin)
    return LinearConstraint(con.coeffs, ">=", con.rhs + margin)


def implicit_equalities(constraints: Sequence[LinearConstraint]) -> list[int]:
    """Indices of the inequalities that hold with equality on every feasible point."""
    constraints = list(constraints)
    if not lp_feasible(constraints).feasible:
        raise InfeasibleSystemError("constraint system is infeasible")
    out = []
    for i, con in enumerate(constraints):
        if con.rel == "==":
            continue
        if _slack_extremum(constraints, i) == 0:
            out.append(i)
    return out


def relative_interior_point(constraints: Sequence[LinearConstraint]) -> tuple[Fraction, ...]:
    """A rational point strict on every inequality that is not an implicit equality."""
    constraints = list(constraints)
    base = lp_feasible(constraints)
    if not base.feasible:
        raise InfeasibleSystemError("constraint system is infeasible")
    witnesses = []
    for i, con in enumerate(constraints):
        if con.rel == "==":
            continue
        best = _slack_extremum(constraints, i)
        if best == 0:
            continue  # implicit equality; tight everywhere by definition
        margin = Fraction(1) if best is None else best / 2
        tightened = constraints[:i] + [_tighten(con, margin)] + constraints[i + 1 :]
        result = lp_feasible(tightened)
        assert result.feasible
        witnesses.append(result.witness)
    if not witnesses:
        return base.witness
    n = len(witnesses[0])
    k = Fraction(1, len(witnesses))
    return tuple(sum((w[j] for w in witnesses), Fraction(0)) * k for j in range(n))
