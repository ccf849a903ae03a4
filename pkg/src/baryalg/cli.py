"""Command-line front end: JSON in, JSON out, exact rationals as strings.

Every command prints one report object with a stable field order, so equal
configurations (including seeds) produce byte-identical reports.  Elapsed
time is reported only when --timing is passed, keeping default output
reproducible.  Exit code 0 means a decided verdict (including negative
ones); nonzero codes carry a distinct diagnostic code in the error payload.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, affine, formula, hull, mode
from .linalg import LinalgError
from .scalar import RingSpec, ScalarError, format_rational, parse_rational


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int = 3):
        super().__init__(message)
        self.code = code
        self.exit_code = exit_code


PRINCIPLES = {
    "hull-member": (
        "membership in a coefficient-ring hull asks for a coefficient vector "
        "inside the ring's closed unit interval that sums to 1 and recombines "
        "to the query point"
    ),
    "caratheodory": (
        "every member of a rational hull is a positive combination of an "
        "affinely independent subset of the generators"
    ),
    "synth-formula": (
        "a conjunction of two-point chain relations with one inverted-prime "
        "parameter pins down any rational affine combination existentially"
    ),
    "verify-formula": (
        "re-solving the constraint system symbolically must determine every "
        "variable uniquely and reproduce the coefficient vector"
    ),
    "eval-term": (
        "a binary term evaluates to the affine combination given by its "
        "expanded coefficient vector"
    ),
    "laws-check": (
        "barycentric operations are idempotent, twisted-commutative, entropic, "
        "and cancellative for nonzero parameters"
    ),
    "closure": (
        "segment convexity requires every ring segment between two members, on "
        "every ring line through them; the engine explores a bounded slice"
    ),
    "probe-convexity": (
        "a ring hull need not be closed under all rational barycentric "
        "operations; failures witness the gap"
    ),
    "affine-equiv": (
        "bounded rational V-polytopes are affinely equivalent exactly when an "
        "invertible affine map bijects their vertex sets"
    ),
    "iso-check": (
        "for rational polytopes, isomorphism of the barycentric algebras "
        "coincides with affine equivalence, the witness map restricted to the "
        "polytope being the isomorphism"
    ),
    "hexagon-demo": (
        "in a centrally symmetric hexagon the two long diagonals share their "
        "midpoint although no vertex lies in the hull of the other five"
    ),
}

SAMPLED_COMMANDS = ("laws-check", "probe-convexity", "iso-check")


@dataclass
class JobConfig:
    command: str
    options: dict
    timing: bool = False
    out: Optional[str] = None


@dataclass
class Report:
    command: str
    parameters: dict
    result: dict
    principle: str
    elapsed_ms: Optional[int] = None

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "version": __version__,
            "parameters": self.parameters,
            "result": self.result,
            "principle": self.principle,
        }
        if self.elapsed_ms is not None:
            payload["elapsed_ms"] = self.elapsed_ms
        return json.dumps(payload, ensure_ascii=False)


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def _parse_ring(text: str) -> RingSpec:
    try:
        return RingSpec.from_json(text)
    except ScalarError as exc:
        raise CliError("bad-ring", str(exc)) from exc


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ScalarError as exc:
        raise CliError("bad-rational", str(exc)) from exc


def _parse_point(text: str) -> tuple[Fraction, ...]:
    text = text.strip()
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError("bad-json", f"invalid point JSON: {exc}") from exc
        return tuple(_rational(str(c)) for c in data)
    return tuple(_rational(part) for part in text.split(","))


def _points_from_json(data) -> list[tuple[Fraction, ...]]:
    if not isinstance(data, list):
        raise CliError("bad-json", "point set JSON must be an array of vectors")
    out = []
    for item in data:
        if not isinstance(item, list):
            raise CliError("bad-json", "each point must be an array of rationals")
        out.append(tuple(_rational(str(c)) for c in item))
    return out


def _parse_point_set(text: str) -> list[tuple[Fraction, ...]]:
    """Inline set syntax: JSON, or "a;b;c" rows of comma coordinates, or a
    plain comma list of one-dimensional points."""
    text = text.strip()
    if text.startswith("["):
        try:
            return _points_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise CliError("bad-json", f"invalid point set JSON: {exc}") from exc
    if ";" in text:
        rows = [row for row in text.split(";") if row.strip()]
        return [_parse_point(row) for row in rows]
    return [(_rational(part),) for part in text.split(",")]


def _load_point_file(text: str) -> list[tuple[Fraction, ...]]:
    text = text.strip()
    if not text.startswith("["):
        path = Path(text)
        if not path.exists():
            raise CliError("bad-input", f"no such point file: {text}")
        text = path.read_text()
    try:
        return _points_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise CliError("bad-json", f"invalid point file: {exc}") from exc


def _fmt_point(point: Sequence[Fraction]) -> list[str]:
    return [format_rational(c) for c in point]


def _fmt_map(psi: Optional[affine.AffineMap]):
    if psi is None:
        return None
    return {
        "matrix": [[format_rational(c) for c in row] for row in psi.matrix],
        "translation": _fmt_point(psi.translation),
    }


def _require_same_dimension(*point_groups):
    dims = {len(p) for group in point_groups for p in group}
    if len(dims) > 1:
        raise CliError(
            "dimension-mismatch",
            f"points live in different ambient dimensions: {sorted(dims)}",
            exit_code=4,
        )


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------


def _cmd_hull_member(opts) -> dict:
    point = _parse_point(opts["point"])
    points = _parse_point_set(opts["set"])
    _require_same_dimension([point], points)
    if opts.get("ring"):
        ring = _parse_ring(opts["ring"])
        report = hull.membership_report_T(point, points, ring)
    else:
        report = hull.membership_report_Q(point, points)
    result = {
        "member": report.member,
        "reason": report.reason,
        "combination": (
            None
            if report.combination is None
            else [[i, format_rational(c)] for i, c in report.combination.support]
        ),
        "certificate": (
            None
            if report.certificate is None
            else [format_rational(c) for c in report.certificate]
        ),
    }
    if report.rational_point is not None:
        result["rational_point"] = _fmt_point(report.rational_point)
    return result


def _cmd_caratheodory(opts) -> dict:
    point = _parse_point(opts["point"])
    points = _parse_point_set(opts["set"])
    _require_same_dimension([point], points)
    try:
        indices, coeffs = hull.caratheodory(point, points)
    except hull.HullError as exc:
        raise CliError("not-a-member", str(exc)) from exc
    return {
        "indices": indices,
        "coefficients": [format_rational(c) for c in coeffs],
        "support_points": [_fmt_point(points[i]) for i in indices],
    }


def _cmd_synth_formula(opts) -> dict:
    ring = _parse_ring(opts["ring"])
    coeffs = [_rational(c) for c in opts["coeffs"].split(",")]
    try:
        phi = formula.synth_phi(coeffs, ring)
    except formula.SynthesisError as exc:
        raise CliError("synthesis-failed", str(exc), exit_code=5) from exc
    except formula.FormulaError as exc:
        raise CliError("bad-coefficients", str(exc)) from exc
    return {
        "formula": json.loads(formula.formula_to_json(phi)),
        "text": formula.format_formula(phi),
        "verified": formula.verify_phi(phi, coeffs),
    }


def _cmd_verify_formula(opts) -> dict:
    text = opts["formula"].strip()
    if not text.startswith("{"):
        path = Path(text)
        if not path.exists():
            raise CliError("bad-input", f"no such formula file: {text}")
        text = path.read_text()
    try:
        data = json.loads(text)
        if isinstance(data, dict) and "formula" in data:  # accept a full report
            data = (
                data["result"]["formula"]
                if "result" in data
                else data["formula"]
            )
        phi = formula.formula_from_json(json.dumps(data))
    except (json.JSONDecodeError, formula.FormulaError) as exc:
        raise CliError("bad-json", f"invalid formula: {exc}") from exc
    coeffs = [_rational(c) for c in opts["coeffs"].split(",")]
    try:
        valid = formula.verify_phi(phi, coeffs)
    except formula.FormulaError as exc:
        raise CliError("bad-coefficients", str(exc)) from exc
    return {"valid": valid}


def _cmd_eval_term(opts) -> dict:
    try:
        term = mode.parse_term(opts["term"])
    except mode.ModeError as exc:
        raise CliError("bad-term", str(exc)) from exc
    points = _parse_point_set(opts["points"])
    _require_same_dimension(points)
    assignment = dict(enumerate(points))
    try:
        value = mode.eval_term(term, assignment)
    except mode.ModeError as exc:
        raise CliError("bad-term", str(exc)) from exc
    return {"value": _fmt_point(value)}


def _random_point(rng: random.Random, dim: int) -> tuple[Fraction, ...]:
    return tuple(
        Fraction(rng.randint(-16, 16), rng.randint(1, 8)) for _ in range(dim)
    )


def _cmd_laws_check(opts) -> dict:
    rng = random.Random(opts["seed"])
    dim = opts.get("dim") or 2
    samples = opts["samples"]
    checked: dict[str, int] = {}
    violations = []
    not_applicable = 0
    for _ in range(samples):
        points = [_random_point(rng, dim) for _ in range(4)]
        params = [Fraction(rng.randint(0, 12), 12) for _ in range(2)]
        report = mode.check_laws(points, params)
        for law, count in report.checked.items():
            checked[law] = checked.get(law, 0) + count
        not_applicable += report.cancellation_not_applicable
        violations.extend(report.violations)
    return {
        "samples": samples,
        "checked": checked,
        "violations": [
            {"law": law, "witness": [str(w) for w in witness]}
            for law, witness in violations
        ],
        "cancellation_not_applicable": not_applicable,
        "ok": not violations,
    }


def _cmd_closure(opts) -> dict:
    ring = _parse_ring(opts["ring"])
    points = _parse_point_set(opts["set"])
    _require_same_dimension(points)
    depth = opts["depth"]
    rounds = opts["rounds"]
    line_bound = opts.get("line_bound") or 3
    if depth < 0 or rounds < 0 or line_bound < 1:
        raise CliError("bad-input", "bounds must be positive")
    closure = hull.segment_closure_bounded(points, ring, depth, rounds, line_bound)
    ordered = sorted(closure)
    return {
        "bounds": {"depth": depth, "rounds": rounds, "line_bound": line_bound},
        "size": len(ordered),
        "points": [_fmt_point(p) for p in ordered],
    }


def _cmd_probe_convexity(opts) -> dict:
    ring = _parse_ring(opts["ring"])
    points = _parse_point_set(opts["set"])
    _require_same_dimension(points)
    report = hull.q_convexity_probe(points, ring, opts["samples"], opts["seed"])
    return {
        "samples": report.samples,
        "failures": [
            {"a": _fmt_point(a), "b": _fmt_point(b), "q": format_rational(q)}
            for a, b, q in report.failures
        ],
        "q_convex_so_far": report.q_convex_so_far,
    }


def _load_polytopes(opts) -> tuple[hull.VPolytope, hull.VPolytope]:
    left = _load_point_file(opts["left"])
    right = _load_point_file(opts["right"])
    if not left or not right:
        raise CliError("unsupported", "empty generating sets are unsupported", 5)
    _require_same_dimension(left, right)
    return hull.VPolytope(left), hull.VPolytope(right)


def _cmd_affine_equiv(opts) -> dict:
    left, right = _load_polytopes(opts)
    verdict = affine.affine_equivalence(left, right)
    return {
        "equivalent": verdict.equivalent,
        "reason": verdict.reason,
        "witness": _fmt_map(verdict.witness),
    }


def _cmd_iso_check(opts) -> dict:
    left, right = _load_polytopes(opts)
    ring = _parse_ring(opts["ring"])
    verdict = affine.iso_decide(
        left, right, ring, samples=opts["samples"], seed=opts["seed"]
    )
    return {
        "isomorphic": verdict.isomorphic,
        "reason": verdict.reason,
        "witness": _fmt_map(verdict.witness),
        "rationale": verdict.rationale,
        "homomorphism_check": {
            "samples": verdict.homomorphism_samples,
            "exact": verdict.homomorphism_exact,
        },
    }


def _cmd_hexagon_demo(_opts) -> dict:
    holds = affine.hexagon_relation_check()
    hexagon = [_fmt_point(v) for v in affine.HEXAGON]
    return {"holds": holds, "vertices": hexagon, "shared_midpoint": ["0", "0"]}


COMMANDS = {
    "hull-member": _cmd_hull_member,
    "caratheodory": _cmd_caratheodory,
    "synth-formula": _cmd_synth_formula,
    "verify-formula": _cmd_verify_formula,
    "eval-term": _cmd_eval_term,
    "laws-check": _cmd_laws_check,
    "closure": _cmd_closure,
    "probe-convexity": _cmd_probe_convexity,
    "affine-equiv": _cmd_affine_equiv,
    "iso-check": _cmd_iso_check,
    "hexagon-demo": _cmd_hexagon_demo,
}


def run(config: JobConfig) -> Report:
    started = time.monotonic()
    handler = COMMANDS[config.command]
    try:
        result = handler(config.options)
    except (hull.HullError, mode.ModeError, affine.AffineError, LinalgError) as exc:
        if "dimension" in str(exc):
            raise CliError("dimension-mismatch", str(exc), exit_code=4) from exc
        raise CliError("bad-input", str(exc)) from exc
    parameters = {
        k: v for k, v in sorted(config.options.items()) if v is not None
    }
    elapsed = int((time.monotonic() - started) * 1000) if config.timing else None
    return Report(
        command=config.command,
        parameters=parameters,
        result=result,
        principle=PRINCIPLES[config.command],
        elapsed_ms=elapsed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="baryalg",
        description="Exact decision procedures for barycentric algebras "
        "over subrings of the rationals.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, timing=True):
        p.add_argument("--out", help="write the JSON report to this file")
        if timing:
            p.add_argument(
                "--timing", action="store_true", help="include elapsed milliseconds"
            )

    p = sub.add_parser("hull-member", help="hull membership over Q or a ring")
    p.add_argument("--point", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--ring", help='e.g. {"inverted_primes":[2]}; omit for Q')
    common(p)

    p = sub.add_parser("caratheodory", help="independent positive recombination")
    p.add_argument("--point", required=True)
    p.add_argument("--set", required=True)
    common(p)

    p = sub.add_parser("synth-formula", help="synthesize an existential chain formula")
    p.add_argument("--ring", required=True)
    p.add_argument("--coeffs", required=True, help='e.g. "-1/2,3/2"')
    common(p)

    p = sub.add_parser("verify-formula", help="verify a formula against coefficients")
    p.add_argument("--formula", required=True, help="formula JSON or a file path")
    p.add_argument("--coeffs", required=True)
    common(p)

    p = sub.add_parser("eval-term", help="evaluate a term S-expression")
    p.add_argument("--term", required=True, help='e.g. "(op x0 x1 1/2)"')
    p.add_argument("--points", required=True, help="assignment for x0,x1,...")
    common(p)

    p = sub.add_parser("laws-check", help="check groupoid laws on random samples")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dim", type=int, default=2)
    common(p)

    p = sub.add_parser("closure", help="bounded segment-convex closure")
    p.add_argument("--set", required=True)
    p.add_argument("--ring", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--line-bound", type=int, default=3, dest="line_bound")
    common(p)

    p = sub.add_parser("probe-convexity", help="probe rational convexity of a ring hull")
    p.add_argument("--set", required=True)
    p.add_argument("--ring", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    common(p)

    p = sub.add_parser("affine-equiv", help="affine equivalence of two V-polytopes")
    p.add_argument("--left", required=True, help="point file or inline JSON")
    p.add_argument("--right", required=True)
    common(p)

    p = sub.add_parser("iso-check", help="barycentric-algebra isomorphism decision")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--ring", required=True)
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--seed", type=int, required=True)
    common(p)

    p = sub.add_parser("hexagon-demo", help="shared-midpoint hexagon demonstration")
    common(p)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    options = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "out", "timing")
    }
    config = JobConfig(
        command=args.command,
        options=options,
        timing=getattr(args, "timing", False),
        out=args.out,
    )
    try:
        report = run(config)
    except CliError as exc:
        payload = json.dumps({"error": {"code": exc.code, "message": str(exc)}})
        print(payload)
        return exc.exit_code
    text = report.to_json()
    if config.out:
        Path(config.out).write_text(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
