"""Classification of rank-two associators, case by case.

``classify`` returns the explicit solution families where they are known,
a nonexistence verdict backed by a certificate, or ``Unknown``.  The
finite-field searches below are independent oracles for those claims.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field

from . import kernels
from .blockmat import Matrix, swap_block, unit_matrix
from .budget import BudgetExceeded, resolve_budget
from .certificates import (Certificate, check_certificate, nonexistence_certificate,
                           nonexistence_reason)
from .fusion import FusionRule
from .gauge import INCONCLUSIVE, NO, Equivalence, are_equivalent, gauge_count
from .pentagon import (Associator, check_ass4_all, check_biedenharn_elliot_all,
                       check_block_system)
from .scalar import FieldError, FieldSpec, solve_monic_quadratic

__all__ = [
    "Classification",
    "SolutionClass",
    "classify",
    "shifted_solution",
    "identity_swap_solution",
    "fibonacci_solution",
    "SearchResult",
    "brute_force_search",
    "random_search",
    "nonexistence_certificate",
    "check_certificate",
]

NONEXISTENT = "Nonexistent"
SOLUTIONS = "Solutions"
UNKNOWN = "Unknown"

# exhaustive gauge comparisons inside classify stay below this many gauges
CLASSIFY_GAUGE_BUDGET = 5000
REDUCTION_FIELD = FieldSpec(3)


# ---------------------------------------------------------------------------
# named solutions
# ---------------------------------------------------------------------------


def identity_swap_solution(n: int, field: FieldSpec) -> Associator:
    """``lam33 = I_[n]`` for the rule ``(0, n)``."""
    rule = FusionRule(0, n)
    return Associator(rule, Matrix.zeros(field, 0, 0), swap_block(field, n))


def shifted_solution(n: int, field: FieldSpec | None = None) -> Associator:
    """The cyclically shifted variant of ``I_[n]`` for the rule ``(0, n)``.

    Block ``(r, c)`` is the unit matrix ``I_{r + c - 1 (mod n), r}``.
    """
    if n < 2:
        raise ValueError("the shifted solution needs n >= 2")
    field = field or FieldSpec(0)
    rows = []
    for r in range(1, n + 1):
        rows.append(Matrix.hstack([unit_matrix(field, n, n, (r + c - 2) % n + 1, r)
                                   for c in range(1, n + 1)]))
    return Associator(FusionRule(0, n), Matrix.zeros(field, 0, 0), Matrix.vstack(rows))


def sign_solution(field: FieldSpec, sign: int) -> Associator:
    return Associator(FusionRule(1, 0), Matrix.zeros(field, 0, 0),
                      Matrix.from_rows(field, [[sign]]))


def fibonacci_solution(field: FieldSpec, omega) -> Associator:
    """``lam1 = (1)``, ``lam2 = [[w, 1], [w, -w]]`` for a root ``w`` of ``x^2 + x - 1``."""
    return Associator.from_rows(FusionRule(1, 1), field, [[1]], [[omega, 1], [omega, -omega]])


# ---------------------------------------------------------------------------
# classification report
# ---------------------------------------------------------------------------


@dataclass
class SolutionClass:
    name: str
    representative: Associator

    def to_json(self) -> dict:
        return {"name": self.name, **associator_json(self.representative)}


@dataclass
class Relation:
    first: str
    second: str
    result: Equivalence
    field: str

    def to_json(self) -> dict:
        return {"first": self.first, "second": self.second, "field": self.field,
                **self.result.to_json()}


@dataclass
class Classification:
    rule: FusionRule
    field: FieldSpec
    verdict: str
    requested_field: FieldSpec | None = None
    reason: str | None = None
    classes: list = dc_field(default_factory=list)
    relations: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)
    certificate: Certificate | None = None

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def to_json(self) -> dict:
        out = {
            "rule": self.rule.to_json(),
            "field": str(self.requested_field or self.field),
            "verdict": self.verdict,
        }
        if self.requested_field is not None and self.requested_field != self.field:
            out["extended_field"] = str(self.field)
        if self.reason:
            out["reason"] = self.reason
        if self.verdict == SOLUTIONS:
            out["class_count"] = self.class_count
            out["classes"] = [c.to_json() for c in self.classes]
            out["relations"] = [r.to_json() for r in self.relations]
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        out["notes"] = list(self.notes)
        return out

    def summary(self) -> str:
        if self.verdict == NONEXISTENT:
            return f"No ({self.reason})"
        if self.verdict == UNKNOWN:
            return "Unknown"
        names = ", ".join(c.name for c in self.classes)
        text = f"{self.class_count} class{'es' if self.class_count != 1 else ''} ({names})"
        if self.rule.m == 0 and self.rule.n > 1:
            text = "at least " + text
        verdicts = {r.result.verdict for r in self.relations}
        reduced = sorted({r.field for r in self.relations} - {str(self.field)})
        if self.relations:
            if verdicts == {NO} and reduced:
                text += f", inequivalent over the reduction to {', '.join(reduced)}"
            elif verdicts == {NO}:
                text += ", pairwise inequivalent"
            elif INCONCLUSIVE in verdicts:
                text += ", inequivalence inconclusive"
        return text

    def to_text(self) -> str:
        lines = [f"rule: {self.rule}", f"field: {self.requested_field or self.field}"]
        if self.requested_field is not None and self.requested_field != self.field:
            lines.append(f"extended to: {self.field}")
        lines.append(f"verdict: {self.verdict}" + (f" ({self.reason})" if self.reason else ""))
        for c in self.classes:
            a = c.representative
            lines.append(f"  class {c.name}: lambda1={a.lam1.to_text_rows()} "
                         f"lambda2={a.lam2.to_text_rows()}")
        for r in self.relations:
            extra = f" over {r.field}" if r.field != str(self.field) else ""
            lines.append(f"  {r.first} vs {r.second}: {r.result.verdict} "
                         f"({r.result.strategy}{extra})")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def associator_json(a: Associator) -> dict:
    return {"rule": a.rule.to_json(), "field": str(a.field),
            "lambda1": a.lam1.to_text_rows(), "lambda2": a.lam2.to_text_rows()}


def _verify(a: Associator) -> None:
    if not check_block_system(a).ok:
        raise AssertionError(f"listed solution fails the block equations: {a}")
    if not all(check_biedenharn_elliot_all(a)) or not all(check_ass4_all(a)):
        raise AssertionError(f"listed solution fails the pentagon: {a}")


def _compare(a: Associator, b: Associator, budget: int) -> Equivalence:
    if a.field.is_finite and gauge_count(a.rule, a.field) <= budget:
        return are_equivalent(a, b, "exhaustive", budget)
    return are_equivalent(a, b, "parametric-scaling")


def _relations(classes: list[SolutionClass], budget: int) -> list[Relation]:
    out = []
    for x, y in itertools.combinations(classes, 2):
        res = _compare(x.representative, y.representative, budget)
        out.append(Relation(x.name, y.name, res, str(x.representative.field)))
    return out


def _quadratic_field(spec: FieldSpec) -> tuple[FieldSpec, list]:
    """A field containing the roots of ``x^2 + x - 1``, extending ``spec`` if needed."""
    roots = solve_monic_quadratic(1, -1, spec)
    if roots:
        return spec, list(roots)
    if spec.is_extension:
        return spec, []
    ext = spec.extend(1, 1) if spec.char == 2 else spec.extend(0, -5)
    return ext, list(solve_monic_quadratic(1, -1, ext))


@functools.lru_cache(maxsize=32)
def _checked_certificate(rule: FusionRule) -> Certificate:
    # certificates are field independent, so one replay per rule suffices
    cert = nonexistence_certificate(rule)
    if not check_certificate(cert):
        raise AssertionError("nonexistence certificate failed its own check")
    return cert


def classify(rule: FusionRule, spec: FieldSpec, gauge_budget: int = CLASSIFY_GAUGE_BUDGET
             ) -> Classification:
    m, n = rule.m, rule.n
    reason = nonexistence_reason(rule)
    if reason is not None:
        cert = _checked_certificate(rule)
        return Classification(rule, spec, NONEXISTENT, spec, reason, certificate=cert)

    if (m, n) == (1, 0):
        plus, minus = sign_solution(spec, 1), sign_solution(spec, -1)
        classes = [SolutionClass("C+", plus)]
        notes = []
        if plus == minus:
            notes.append("+e2 and -e2 coincide in characteristic 2")
        else:
            classes.append(SolutionClass("C-", minus))
        for c in classes:
            _verify(c.representative)
        return Classification(rule, spec, SOLUTIONS, spec, classes=classes,
                              relations=_relations(classes, gauge_budget), notes=notes)

    if (m, n) == (0, 1):
        sol = identity_swap_solution(1, spec)
        _verify(sol)
        return Classification(rule, spec, SOLUTIONS, spec, classes=[SolutionClass("C1", sol)],
                              notes=["lam33 = (1) is the only solution"])

    if m == 0:
        classes = [SolutionClass(f"C_{n}", identity_swap_solution(n, spec)),
                   SolutionClass(f"C'_{n}", shifted_solution(n, spec))]
        for c in classes:
            _verify(c.representative)
        notes = ["at least two solutions; completeness is not claimed"]
        if spec.is_finite and gauge_count(rule, spec) <= gauge_budget:
            relations = _relations(classes, gauge_budget)
        elif gauge_count(rule, REDUCTION_FIELD) <= gauge_budget:
            red = [SolutionClass(c.name, f(n, REDUCTION_FIELD)) for c, f in
                   zip(classes, (identity_swap_solution, shifted_solution))]
            relations = _relations(red, gauge_budget)
            notes.append(f"inequivalence checked over the reduction to {REDUCTION_FIELD}")
        else:
            relations = [Relation(classes[0].name, classes[1].name,
                                  Equivalence(INCONCLUSIVE, "none", note="gauge space too large"),
                                  str(spec))]
        return Classification(rule, spec, SOLUTIONS, spec, classes=classes,
                              relations=relations, notes=notes)

    if (m, n) == (1, 1):
        field, roots = _quadratic_field(spec)
        notes = []
        if field != spec:
            notes.append(f"x^2 + x - 1 has no root in {spec}; solutions live in {field}")
        if not roots:
            notes.append(f"x^2 + x - 1 has no root in {spec}, so there is no solution over it")
            return Classification(rule, spec, SOLUTIONS, spec, notes=notes)
        if len(roots) == 1:
            notes.append("x^2 + x - 1 has a double root (characteristic 5)")
        names = ["C(5)"] if len(roots) == 1 else ["C(0)", "C'(0)"]
        classes = [SolutionClass(nm, fibonacci_solution(field, w)) for nm, w in zip(names, roots)]
        for c in classes:
            _verify(c.representative)
        return Classification(rule, field, SOLUTIONS, spec, classes=classes,
                              relations=_relations(classes, gauge_budget), notes=notes)

    return Classification(rule, spec, UNKNOWN, spec,
                          notes=["m > 1 with 2m <= n^2 is not decided by the available arguments"])


# ---------------------------------------------------------------------------
# finite-field searches
# ---------------------------------------------------------------------------


@dataclass
class Found:
    index: int | None
    associator: Associator
    invertible: bool

    def to_json(self) -> dict:
        out = associator_json(self.associator)
        out["invertible"] = self.invertible
        if self.index is not None:
            out["index"] = self.index
        return out


@dataclass
class SearchResult:
    rule: FusionRule
    field: FieldSpec
    searched: int
    found: list
    backend: str
    mode: str = "exhaustive"

    @property
    def solutions(self) -> list[Associator]:
        return [f.associator for f in self.found if f.invertible]

    @property
    def singular(self) -> list[Associator]:
        return [f.associator for f in self.found if not f.invertible]

    def to_json(self) -> dict:
        return {"rule": self.rule.to_json(), "field": str(self.field), "mode": self.mode,
                "searched": self.searched, "backend": self.backend,
                "invertible_solutions": len(self.solutions),
                "singular_solutions": len(self.singular),
                "candidates": [f.to_json() for f in self.found]}


def _from_digits(rule: FusionRule, field: FieldSpec, digits) -> Associator:
    m, n = rule.m, rule.n
    k1, s = (m * n) ** 2, m + n * n
    d = [field.from_index(int(x)) if field.is_extension else int(x) for x in digits]
    lam1 = [d[r * m * n:(r + 1) * m * n] for r in range(m * n)]
    lam2 = [d[k1 + r * s:k1 + (r + 1) * s] for r in range(s)]
    return Associator.from_rows(rule, field, lam1, lam2, raw=True)


def _assert_rank_conditions(a: Associator) -> None:
    # invertible solutions with m > 1 must have lam22 = 0 and full-rank off-diagonal blocks
    m = a.rule.m
    if m > 1:
        if not a.lam22.is_zero() or a.lam23.rank() != m or a.lam32.rank() != m:
            raise AssertionError(f"solution violates the m > 1 rank conditions: {a}")


def _tag(rule, field, idx, a) -> Found:
    inv = a.is_invertible()
    if inv:
        _assert_rank_conditions(a)
    return Found(idx, a, inv)


def brute_force_search(rule: FusionRule, spec: FieldSpec, include_singular: bool = True,
                       budget: int | None = None) -> SearchResult:
    """Enumerate every ``(lam1, lam2)`` over a finite field in lexicographic order."""
    if not spec.is_finite:
        raise FieldError("brute force needs a finite field")
    budget = resolve_budget(budget)
    nd = kernels.num_digits(rule.m, rule.n)
    total = spec.order ** nd
    if total > budget:
        raise BudgetExceeded(total, budget, "brute force")
    found = []
    if spec.is_extension:
        # no compiled path for extension fields: exact evaluation
        for idx, digits in enumerate(itertools.product(range(spec.order), repeat=nd)):
            a = _from_digits(rule, spec, digits)
            if check_block_system(a).ok:
                found.append(_tag(rule, spec, idx, a))
        backend = "exact"
    else:
        prog = kernels.compile_program(rule.m, rule.n, spec.p)
        for idx in kernels.scan_lex(prog, 0, total).tolist():
            digits = kernels.digits_of_index(idx, nd, spec.p)
            found.append(_tag(rule, spec, idx, _from_digits(rule, spec, digits)))
        backend = kernels.BACKEND
    if not include_singular:
        found = [f for f in found if f.invertible]
    return SearchResult(rule, spec, total, found, backend)


def random_search(rule: FusionRule, spec: FieldSpec, count: int, seed: int = 0) -> SearchResult:
    """Uniform random candidates over a prime field; every pass is reported."""
    if not spec.is_finite or spec.is_extension:
        raise FieldError("random search needs a prime field")
    prog = kernels.compile_program(rule.m, rule.n, spec.p)
    rows = kernels.scan_random(prog, count, seed)
    found = [_tag(rule, spec, None, _from_digits(rule, spec, r)) for r in rows]
    return SearchResult(rule, spec, count, found, kernels.BACKEND, mode=f"random(seed={seed})")
