"""Gauge transformations of associators and equivalence testing.

A gauge is ``(alpha, N1, N2)``: ``phi_{1,i} = phi_{i,1} = alpha * E`` and
``phi_{2,2} = diag(N1, N2)`` on ``e2 (x) e2``.  The transformed associator
``a'`` is defined by ``a * L = R * a'`` where

    L = sum_t sum_k (X_{t,k} (x) e_l) phi_{t,l} (Y_{t,k} phi_{i,j} (x) e_l)
    R = sum_t sum_k (e_i (x) X_{t,k}) phi_{i,t} (e_i (x) Y_{t,k} phi_{j,l})

so equivalence of ``a`` and ``b`` through ``g`` can be tested as
``R_g * b == a * L_g`` without inverting anything.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from sympy import Matrix as SymMatrix, ZZ, factorint
from sympy.matrices.normalforms import smith_normal_decomp

from .blockmat import Matrix, ShapeError, TypedMatrix, identity_typed
from .budget import BudgetExceeded, resolve_budget
from .category import inclusion, mor_tensor, projection, unit_morphism
from .fusion import FusionRule
from .pentagon import Associator
from .scalar import FieldError, FieldSpec, Scalar, solve_monic_quadratic

__all__ = [
    "Gauge",
    "gauge_sides",
    "apply_gauge",
    "compose",
    "Equivalence",
    "are_equivalent",
    "maps_to",
    "iter_gauges",
    "gauge_count",
    "orbits",
]

EQUIVALENT = "EQUIVALENT"
NO = "NO"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Gauge:
    alpha: Scalar
    n1: Matrix
    n2: Matrix

    def __post_init__(self):
        if not self.alpha:
            raise ValueError("alpha must be nonzero")
        for blk in (self.n1, self.n2):
            if blk.rows != blk.cols:
                raise ShapeError("gauge blocks must be square")
            if blk.rows and not blk.is_invertible():
                raise ValueError("gauge blocks must be invertible")

    @classmethod
    def identity(cls, rule: FusionRule, field: FieldSpec) -> "Gauge":
        return cls(field.one, Matrix.identity(field, rule.m), Matrix.identity(field, rule.n))

    @classmethod
    def scaling(cls, rule: FusionRule, alpha, x, y) -> "Gauge":
        f = alpha.field
        return cls(alpha, Matrix.identity(f, rule.m).scale(x), Matrix.identity(f, rule.n).scale(y))

    @property
    def field(self) -> FieldSpec:
        return self.alpha.field

    def phi(self, rule: FusionRule, i: int, j: int) -> TypedMatrix:
        c = rule.c(i, j)
        if i == 1 or j == 1:
            return identity_typed(self.field, c).scale(self.alpha)
        if (self.n1.rows, self.n2.rows) != (c.m1, c.m2):
            raise ShapeError(f"gauge blocks do not fit {rule}")
        return TypedMatrix(c, c, self.n1, self.n2)

    def to_json(self) -> dict:
        return {"alpha": str(self.alpha), "n1": self.n1.to_text_rows(),
                "n2": self.n2.to_text_rows()}

    @classmethod
    def from_json(cls, d: dict, rule: FusionRule, field: FieldSpec) -> "Gauge":
        return cls(field.parse(str(d["alpha"])),
                   Matrix.from_rows(field, d.get("n1", []), ncols=rule.m),
                   Matrix.from_rows(field, d.get("n2", []), ncols=rule.n))


def compose(h: Gauge, g: Gauge) -> Gauge:
    """The gauge acting as ``g`` followed by ``h``."""
    return Gauge(g.alpha * h.alpha, g.n1 @ h.n1, g.n2 @ h.n2)


@functools.lru_cache(maxsize=64)
def _sides_frame(rule: FusionRule, field: FieldSpec, i: int, j: int, l: int):
    """Gauge-independent pieces: ``(t, X (x) e_l, Y)`` and ``(t, e_i (x) X, Y)``."""
    e = lambda s: unit_morphism(field, s)  # noqa: E731
    cij, cjl = rule.c(i, j), rule.c(j, l)
    left = [(t, mor_tensor(rule, inclusion(field, cij, t, k), e(l)), projection(field, cij, t, k))
            for t in (1, 2) for k in range(1, cij[t] + 1)]
    right = [(t, mor_tensor(rule, e(i), inclusion(field, cjl, t, k)), projection(field, cjl, t, k))
             for t in (1, 2) for k in range(1, cjl[t] + 1)]
    return left, right


def gauge_sides(rule: FusionRule, g: Gauge, i: int, j: int, l: int
                ) -> tuple[TypedMatrix, TypedMatrix]:
    """The coefficient matrices ``(L, R)`` of the gauge relation at ``(i, j, l)``."""
    f = g.field
    e = lambda s: unit_morphism(f, s)  # noqa: E731
    whole = rule.power(i, j, l)
    left = TypedMatrix.zeros(f, whole, whole)
    right = TypedMatrix.zeros(f, whole, whole)
    lterms, rterms = _sides_frame(rule, f, i, j, l)
    phi_ij, phi_jl = g.phi(rule, i, j), g.phi(rule, j, l)
    for t, x_e, y in lterms:
        left = left + x_e @ g.phi(rule, t, l) @ mor_tensor(rule, y @ phi_ij, e(l))
    for t, e_x, y in rterms:
        right = right + e_x @ g.phi(rule, i, t) @ mor_tensor(rule, e(i), y @ phi_jl)
    return left, right


def apply_gauge(assoc: Associator, g: Gauge, verify_units: bool = True) -> Associator:
    """The associator obtained from ``assoc`` through ``g``."""
    rule = assoc.rule
    if g.field != assoc.field:
        raise FieldError("gauge and associator over different fields")
    if verify_units:
        for idx in itertools.product((1, 2), repeat=3):
            if idx == (2, 2, 2):
                continue
            left, right = gauge_sides(rule, g, *idx)
            if not (assoc.a(*idx) @ left == right):
                raise AssertionError(f"gauge moves the unit associator at {idx}")
    left, right = gauge_sides(rule, g, 2, 2, 2)
    new = right.inverse() @ assoc.a222 @ left
    return assoc.with_a222(new)


def maps_to(a: Associator, b: Associator, g: Gauge) -> bool:
    """Whether ``g`` carries ``a`` to ``b``."""
    left, right = gauge_sides(a.rule, g, 2, 2, 2)
    return right @ b.a222 == a.a222 @ left


# ---------------------------------------------------------------------------
# exhaustive search
# ---------------------------------------------------------------------------


def _general_linear(field: FieldSpec, k: int) -> Iterator[Matrix]:
    elems = list(field.elements())
    if k == 0:
        yield Matrix.zeros(field, 0, 0)
        return
    for entries in itertools.product(elems, repeat=k * k):
        mat = Matrix.from_rows(field, [entries[r * k:(r + 1) * k] for r in range(k)])
        if mat.is_invertible():
            yield mat


def gauge_count(rule: FusionRule, field: FieldSpec) -> int:
    """Number of ``(alpha, N1, N2)`` triples visited by the exhaustive search."""
    q = field.order

    def gl(k):
        out = 1
        for i in range(k):
            out *= q ** k - q ** i
        return out

    return (q - 1) * gl(rule.m) * gl(rule.n)


def iter_gauges(rule: FusionRule, field: FieldSpec) -> Iterator[Gauge]:
    """All gauges: alpha ascending, then N1 and N2 row-major lexicographic."""
    if not field.is_finite:
        raise FieldError("exhaustive gauge search needs a finite field")
    n2s = list(_general_linear(field, rule.n))
    for alpha in field.units():
        for n1 in _general_linear(field, rule.m):
            for n2 in n2s:
                yield Gauge(alpha, n1, n2)


@dataclass
class Equivalence:
    verdict: str
    strategy: str
    gauge: Gauge | None = None
    searched: int = 0
    system: dict | None = None
    note: str = ""

    @property
    def equivalent(self) -> bool:
        return self.verdict == EQUIVALENT

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "strategy": self.strategy, "searched": self.searched}
        if self.gauge is not None:
            out["gauge"] = self.gauge.to_json()
        if self.system is not None:
            out["system"] = self.system
        if self.note:
            out["note"] = self.note
        return out


def _exhaustive(a: Associator, b: Associator, budget: int | None) -> Equivalence:
    budget = resolve_budget(budget)
    need = gauge_count(a.rule, a.field)
    if need > budget:
        raise BudgetExceeded(need, budget, "gauge search")
    searched = 0
    for g in iter_gauges(a.rule, a.field):
        searched += 1
        if maps_to(a, b, g):
            return Equivalence(EQUIVALENT, "exhaustive", g, searched)
    return Equivalence(NO, "exhaustive", None, searched)


# ---------------------------------------------------------------------------
# scaling family: alpha, N1 = x I, N2 = y I
# ---------------------------------------------------------------------------

_PROBE = (2, 3, 5)


@functools.lru_cache(maxsize=64)
def _diag_exponents(rule: FusionRule) -> tuple[list, list]:
    """Exponent vectors of the diagonal entries of ``L`` and ``R`` in (alpha, x, y)."""
    q = FieldSpec(0)
    g = Gauge.scaling(rule, q(_PROBE[0]), q(_PROBE[1]), q(_PROBE[2]))
    left, right = gauge_sides(rule, g, 2, 2, 2)
    out = []
    for side in (left, right):
        plain = side.to_plain()
        n = plain.rows
        vecs = []
        for r in range(n):
            for c in range(n):
                if r != c and plain[r, c]:
                    raise AssertionError("scaling gauge is not diagonal")
            val = plain[r, r]
            if val.b or Fraction(val.a).denominator != 1 or val.a <= 0:
                raise AssertionError("scaling gauge entry is not a monomial")
            fac = factorint(int(val.a))
            if set(fac) - set(_PROBE):
                raise AssertionError("scaling gauge entry is not a monomial")
            vecs.append(tuple(fac.get(p, 0) for p in _PROBE))
        out.append(vecs)
    return out[0], out[1]


def _power(x: Scalar, e: int) -> Scalar:
    return x ** e if e >= 0 else x.inverse() ** (-e)


def _root(c: Scalar, d: int) -> Scalar | None:
    if d == 1:
        return c
    f = c.field
    if d == 2:
        roots = solve_monic_quadratic(0, -c, f)
        return roots[0] if roots else None
    if f.is_finite:
        for z in f.units():
            if z ** d == c:
                return z
        return None
    raise NotImplementedError(f"degree-{d} roots over {f}")


def _scaling(a: Associator, b: Associator) -> Equivalence:
    rule, f = a.rule, a.field
    lexp, rexp = _diag_exponents(rule)
    pa, pb = a.a222.to_plain(), b.a222.to_plain()
    n = pa.rows
    rows, targets, text = [], [], []
    for r in range(n):
        for c in range(n):
            x, y = pa[r, c], pb[r, c]
            if bool(x) != bool(y):
                return _scaling_fail(rule, f"entry ({r + 1},{c + 1}) zero in one associator only",
                                     {"monomials": text, "zero_mismatch": [r + 1, c + 1]})
            if not x:
                continue
            e = tuple(lc - rr for lc, rr in zip(lexp[c], rexp[r]))
            ratio = y / x
            if e == (0, 0, 0):
                if ratio != f.one:
                    return _scaling_fail(rule, f"entry ({r + 1},{c + 1}) is gauge invariant",
                                         {"monomials": text + [[list(e), str(ratio)]]})
                continue
            rows.append(list(e))
            targets.append(ratio)
            text.append([list(e), str(ratio)])
    system = {"variables": ["alpha", "x", "y"], "monomials": text}
    if not rows:
        g = Gauge.identity(rule, f)
        return Equivalence(EQUIVALENT, "parametric-scaling", g, 1, system)
    A = SymMatrix(rows)
    D, U, V = smith_normal_decomp(A, domain=ZZ)
    if U * A * V != D:
        raise AssertionError("unexpected Smith decomposition convention")
    # z^D = c' with c'_k = prod_i c_i^{U_ki}
    cprime = []
    for k in range(D.rows):
        acc = f.one
        for i in range(A.rows):
            acc = acc * _power(targets[i], int(U[k, i]))
        cprime.append(acc)
    z = [f.one] * 3
    for k in range(D.rows):
        d = int(D[k, k]) if k < 3 else 0
        if d == 0:
            if cprime[k] != f.one:
                return _scaling_fail(rule, "monomial system is inconsistent", system)
            continue
        try:
            root = _root(cprime[k], d)
        except NotImplementedError as exc:
            return Equivalence(INCONCLUSIVE, "parametric-scaling", None, 0, system, str(exc))
        if root is None:
            return _scaling_fail(rule, f"no {d}-th root of {cprime[k]}", system)
        z[k] = root
    w = []
    for j in range(3):
        acc = f.one
        for l in range(3):
            acc = acc * _power(z[l], int(V[j, l]))
        w.append(acc)
    g = Gauge.scaling(rule, *w)
    if not maps_to(a, b, g):
        raise AssertionError("scaling solution does not carry a to b")
    return Equivalence(EQUIVALENT, "parametric-scaling", g, 1, system)


def _scaling_fail(rule: FusionRule, why: str, system: dict | None = None) -> Equivalence:
    if system is not None:
        system = {"variables": ["alpha", "x", "y"], **system}
    # with m, n <= 1 every gauge is a scaling gauge, so failure is final
    if rule.m <= 1 and rule.n <= 1:
        return Equivalence(NO, "parametric-scaling", None, 0, system, why)
    return Equivalence(INCONCLUSIVE, "parametric-scaling", None, 0, system, why)


def are_equivalent(a: Associator, b: Associator, strategy: str = "exhaustive",
                   budget: int | None = None) -> Equivalence:
    if a.rule != b.rule:
        raise ValueError("associators for different fusion rules")
    if a.field != b.field:
        raise FieldError("associators over different fields")
    if strategy == "exhaustive":
        if not a.field.is_finite:
            raise FieldError("exhaustive gauge search needs a finite field")
        return _exhaustive(a, b, budget)
    if strategy in ("parametric-scaling", "scaling"):
        return _scaling(a, b)
    raise ValueError(f"unknown strategy {strategy!r}")


def orbits(solutions: list[Associator], strategy: str = "exhaustive",
           budget: int | None = None) -> list[list[Associator]]:
    """Partition solutions into gauge classes (first member is the representative)."""
    classes: list[list[Associator]] = []
    for s in solutions:
        for cls in classes:
            if are_equivalent(cls[0], s, strategy, budget).equivalent:
                cls.append(s)
                break
        else:
            classes.append([s])
    return classes
