"""Associators, 6-j symbols and three independent pentagon checks.

The only free associator datum in rank two is ``a_222 = diag(L1, L2)``
with ``L2 = [[L22, L23], [L32, L33]]``.  Every ``a_{i,j,l}`` with a unit
index is the identity.

* :func:`check_ass4` evaluates the pentagon on four simple objects
  directly in the matrix model (tensor products of typed matrices).
* :func:`check_biedenharn_elliot` evaluates the same constraint on
  multiplicity spaces through 6-j symbols.
* :func:`check_block_system` evaluates the hand-reduced block equations
  for the three cases ``n = 0``, ``m = 0`` and ``m, n > 0``.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .blockmat import Matrix, Shape, ShapeError, TypedMatrix, identity_typed, swap_rect
from .category import inclusion, mor_tensor, projection, unit_morphism
from .fusion import FusionRule
from .scalar import FieldSpec, parse_field

__all__ = [
    "Associator",
    "NotInvertibleError",
    "CheckResult",
    "BlockReport",
    "basis_index_left",
    "basis_index_right",
    "sixj",
    "sixj_table",
    "check_ass4",
    "check_ass4_all",
    "check_biedenharn_elliot",
    "check_biedenharn_elliot_all",
    "check_block_system",
    "block_equations",
    "MatrixOps",
    "pentagon_report",
]


class NotInvertibleError(ValueError):
    """The proposed ``a_222`` is singular."""


class Associator:
    """Associator data ``a_222 = diag(lam1, lam2)`` for a rank-two rule."""

    def __init__(self, rule: FusionRule, lam1: Matrix, lam2: Matrix, *, raw: bool = False):
        m, n = rule.m, rule.n
        if lam1.shape != (m * n, m * n) or lam2.shape != (m + n * n, m + n * n):
            raise ShapeError(f"associator blocks {lam1.shape}, {lam2.shape} do not fit {rule}")
        if lam1.field != lam2.field:
            raise ValueError("associator blocks over different fields")
        self.rule = rule
        self.lam1 = lam1
        self.lam2 = lam2
        self.raw = raw
        if not raw and not self.is_invertible():
            raise NotInvertibleError("a_222 must be invertible")

    @classmethod
    def from_rows(cls, rule: FusionRule, field: FieldSpec, lam1, lam2, **kw) -> "Associator":
        return cls(rule, Matrix.from_rows(field, lam1, ncols=rule.m * rule.n),
                   Matrix.from_rows(field, lam2, ncols=rule.m + rule.n ** 2), **kw)

    @property
    def field(self) -> FieldSpec:
        return self.lam1.field

    def is_invertible(self) -> bool:
        return ((self.lam1.rows == 0 or self.lam1.is_invertible())
                and self.lam2.is_invertible())

    # -- partition of lam2 ---------------------------------------------------
    @property
    def lam22(self) -> Matrix:
        m = self.rule.m
        return self.lam2.sub(0, m, 0, m)

    @property
    def lam23(self) -> Matrix:
        m = self.rule.m
        return self.lam2.sub(0, m, m, self.lam2.cols)

    @property
    def lam32(self) -> Matrix:
        m = self.rule.m
        return self.lam2.sub(m, self.lam2.rows, 0, m)

    @property
    def lam33(self) -> Matrix:
        m = self.rule.m
        return self.lam2.sub(m, self.lam2.rows, m, self.lam2.cols)

    @property
    def a222(self) -> TypedMatrix:
        s = self.rule.power(2, 2, 2)
        return TypedMatrix(s, s, self.lam1, self.lam2)

    def a(self, i: int, j: int, l: int) -> TypedMatrix:
        if (i, j, l) == (2, 2, 2):
            return self.a222
        return identity_typed(self.field, self.rule.power(i, j, l))

    def with_a222(self, a222: TypedMatrix, raw: bool | None = None) -> "Associator":
        return Associator(self.rule, a222.blocks[0], a222.blocks[1],
                          raw=self.raw if raw is None else raw)

    def to_json(self) -> dict:
        return {"rule": self.rule.to_json(), "field": str(self.field),
                "lambda1": self.lam1.to_text_rows(), "lambda2": self.lam2.to_text_rows()}

    @classmethod
    def from_json(cls, d: dict, raw: bool = False) -> "Associator":
        for key in ("rule", "field", "lambda1", "lambda2"):
            if key not in d:
                raise KeyError(key)
        rule = FusionRule.from_json(d["rule"])
        field = parse_field(str(d["field"]))
        return cls.from_rows(rule, field, d["lambda1"], d["lambda2"], raw=raw)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Associator):
            return NotImplemented
        return (self.rule, self.lam1, self.lam2) == (other.rule, other.lam1, other.lam2)

    def __hash__(self):
        return hash((self.rule, self.lam1, self.lam2))

    def sort_key(self) -> str:
        return repr((self.lam1.to_text_rows(), self.lam2.to_text_rows()))

    def __repr__(self):
        return (f"Associator({self.rule}, {self.field}, lam1={self.lam1.to_text_rows()}, "
                f"lam2={self.lam2.to_text_rows()})")


# ---------------------------------------------------------------------------
# multiplicity-space bases and 6-j symbols
# ---------------------------------------------------------------------------


def basis_index_left(rule: FusionRule, i: int, j: int, l: int, s: int,
                     k: int, p: int, q: int) -> int:
    """Position of ``X^{c_kl}_{s,p} (x) X^{c_ij}_{k,q}`` in Hom(e_s, (e_i e_j) e_l)."""
    c = rule.c3
    if not (1 <= p <= c(k, l, s) and 1 <= q <= c(i, j, k)):
        raise IndexError(f"(p, q) = {(p, q)} out of range for k={k}")
    return sum(c(w, l, s) * c(i, j, w) for w in range(1, k)) + (q - 1) * c(k, l, s) + p


def basis_index_right(rule: FusionRule, i: int, j: int, l: int, s: int,
                      t: int, d: int, r: int) -> int:
    """Position of ``X^{c_it}_{s,d} (x) X^{c_jl}_{t,r}`` in Hom(e_s, e_i (e_j e_l))."""
    c = rule.c3
    if not (1 <= d <= c(i, t, s) and 1 <= r <= c(j, l, t)):
        raise IndexError(f"(d, r) = {(d, r)} out of range for t={t}")
    return sum(c(i, w, s) * c(j, l, w) for w in range(1, t)) + (r - 1) * c(i, t, s) + d


def sixj(assoc: Associator, i: int, j: int, k: int, l: int, s: int, t: int) -> Matrix:
    """The 6-j symbol ``{i j k; l s t}``: H^{kl}_s (x) H^{ij}_k -> H^{it}_s (x) H^{jl}_t."""
    c = assoc.rule.c3
    block = assoc.a(i, j, l).block(s)
    r0 = sum(c(i, w, s) * c(j, l, w) for w in range(1, t))
    c0 = sum(c(w, l, s) * c(i, j, w) for w in range(1, k))
    return block.sub(r0, r0 + c(i, t, s) * c(j, l, t), c0, c0 + c(k, l, s) * c(i, j, k))


def sixj_table(assoc: Associator) -> dict:
    return {idx: sixj(assoc, *idx) for idx in itertools.product((1, 2), repeat=6)}


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    ok: bool
    residual: object
    label: str = ""

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# pentagon on four simple objects
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=256)
def _ass4_frame(rule: FusionRule, field: FieldSpec, i1: int, i2: int, i3: int, i4: int):
    """Associator-independent factors of both pentagon sides."""

    def T(x, y):
        return mor_tensor(rule, x, y)

    def e(i):
        return unit_morphism(field, i)

    c23, c34, c12 = rule.c(i2, i3), rule.c(i3, i4), rule.c(i1, i2)
    left = []
    for j in (1, 2):
        for k in range(1, c23[j] + 1):
            x, y = inclusion(field, c23, j, k), projection(field, c23, j, k)
            left.append((j, T(x, e(i4)), T(e(i1), y)))
    right = []
    for j in (1, 2):
        for k in range(1, c34[j] + 1):
            x34, y34 = inclusion(field, c34, j, k), projection(field, c34, j, k)
            for jp in (1, 2):
                for kp in range(1, c12[jp] + 1):
                    x12 = inclusion(field, c12, jp, kp)
                    y12 = projection(field, c12, jp, kp)
                    right.append((j, jp, T(e(i1), T(e(i2), x34)), T(x12, y34),
                                  T(T(y12, e(i3)), e(i4))))
    return left, right


def check_ass4(assoc: Associator, i1: int, i2: int, i3: int, i4: int) -> CheckResult:
    """Both sides of the pentagon for ``(e_i1 e_i2 e_i3 e_i4)`` in the matrix model."""
    rule, field = assoc.rule, assoc.field

    def T(x, y):
        return mor_tensor(rule, x, y)

    def e(i):
        return unit_morphism(field, i)

    total = rule.power(i1, i2, i3, i4)
    lhs = TypedMatrix.zeros(field, total, total)
    rhs = TypedMatrix.zeros(field, total, total)
    a = assoc.a
    left, right = _ass4_frame(rule, field, i1, i2, i3, i4)
    for j, x_e, e_y in left:
        lhs = lhs + (T(e(i1), a(i2, i3, i4) @ x_e)
                     @ a(i1, j, i4)
                     @ T(e_y @ a(i1, i2, i3), e(i4)))
    for j, jp, e_e_x34, x12_y34, y12_e_e in right:
        rhs = rhs + (e_e_x34
                     @ a(i1, i2, j)
                     @ x12_y34
                     @ a(jp, i3, i4)
                     @ y12_e_e)
    res = lhs - rhs
    return CheckResult(res.is_zero(), res, f"Ass4{(i1, i2, i3, i4)}")


def check_ass4_all(assoc: Associator, only_nontrivial: bool = False) -> list[CheckResult]:
    tuples = [(2, 2, 2, 2)] if only_nontrivial else list(itertools.product((1, 2), repeat=4))
    return [check_ass4(assoc, *t) for t in tuples]


# ---------------------------------------------------------------------------
# Biedenharn-Elliott identity
# ---------------------------------------------------------------------------


def check_biedenharn_elliot(assoc: Associator, j0: int, j5: int, j6: int, j7: int, j8: int,
                            j1: int = 2, j2: int = 2, j3: int = 2, j4: int = 2,
                            table: dict | None = None) -> CheckResult:
    """The 6-j form of the pentagon at one index tuple.

    Both sides map ``H^{j6 j4}_{j0} (x) H^{j5 j3}_{j6} (x) H^{j1 j2}_{j5}`` to
    ``H^{j1 j7}_{j0} (x) H^{j2 j8}_{j7} (x) H^{j3 j4}_{j8}``.
    """
    rule, field = assoc.rule, assoc.field
    d = rule.c3

    def F(*idx):
        return table[idx] if table is not None else sixj(assoc, *idx)

    def I(k):
        return Matrix.identity(field, k)

    n_in = d(j6, j4, j0) * d(j5, j3, j6) * d(j1, j2, j5)
    n_out = d(j1, j7, j0) * d(j2, j8, j7) * d(j3, j4, j8)
    lhs = Matrix.zeros(field, n_out, n_in)
    for j in (1, 2):
        f1 = I(d(j1, j7, j0)).kron(F(j2, j3, j, j4, j7, j8))
        f2 = F(j1, j, j6, j4, j0, j7).kron(I(d(j2, j3, j)))
        f3 = I(d(j6, j4, j0)).kron(F(j1, j2, j5, j3, j6, j))
        _audit(f1, f2, f3)
        lhs = lhs + f1 @ f2 @ f3
    a_, b_, c_ = d(j5, j8, j0), d(j3, j4, j8), d(j1, j2, j5)
    p23 = I(a_).kron(swap_rect(field, c_, b_))
    g1 = F(j1, j2, j5, j8, j0, j7).kron(I(b_))
    g3 = F(j5, j3, j6, j4, j0, j8).kron(I(c_))
    _audit(g1, p23, g3)
    res = lhs - g1 @ p23 @ g3
    return CheckResult(res.is_zero(), res, f"BE{(j0, j5, j6, j7, j8)}")


def _audit(*mats: Matrix):
    for x, y in zip(mats, mats[1:]):
        if x.cols != y.rows:
            raise ShapeError(f"non-conformable 6-j composite: {x.shape} then {y.shape}")


def check_biedenharn_elliot_all(assoc: Associator, outer=(2, 2, 2, 2)) -> list[CheckResult]:
    table = sixj_table(assoc)
    return [check_biedenharn_elliot(assoc, *t, *outer, table=table)
            for t in itertools.product((1, 2), repeat=5)]


# ---------------------------------------------------------------------------
# reduced block equations
# ---------------------------------------------------------------------------


class MatrixOps:
    """Exact-matrix operations for :func:`block_equations`."""

    def __init__(self, field: FieldSpec):
        self.field = field

    def I(self, k):
        return Matrix.identity(self.field, k)

    def kron(self, x, y):
        return x.kron(y)

    def mm(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = out @ x
        return out

    def add(self, x, y):
        return x + y

    def zeros(self, r, c):
        return Matrix.zeros(self.field, r, c)

    def swap(self, c, b):
        return swap_rect(self.field, c, b)

    def T(self, x):
        return x.T


EQUATION_LABELS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi",
                   "xii", "xiii")


def block_equations(ops, m: int, n: int, L1, L22, L23, L32, L33) -> list:
    """Reduced pentagon equations as ``(label, lhs, rhs)`` triples.

    ``ops`` supplies identity/kron/product/sum primitives so the same
    equations drive the exact path and the batched integer fallback.
    """
    K, M, A = ops.kron, ops.mm, ops.add
    if n == 0:
        Im = ops.I(m)
        return [("n=0", K(Im, M(L22, L22)), ops.swap(m, m))]
    In = ops.I(n)
    Sn = ops.swap(n, n)
    if m == 0:
        return [("m=0", M(K(In, L33), K(L33, In), K(In, L33)),
                 M(K(L33, In), K(In, Sn), K(L33, In)))]
    Im = ops.I(m)
    Smn = ops.swap(m, n)
    SmnT = ops.T(Smn)
    L1n = K(L1, In)
    eqs = [
        ("i", A(K(Im, M(L22, L22)), M(K(Im, L23), L1n, K(Im, L32))), ops.swap(m, m)),
        ("ii", A(K(Im, M(L22, L23)), M(K(Im, L23), L1n, K(Im, L33))), ops.zeros(m * m, m * n * n)),
        ("iii", A(K(Im, M(L32, L22)), M(K(Im, L33), L1n, K(Im, L32))), ops.zeros(m * n * n, m * m)),
        ("iv", A(K(Im, M(L32, L23)), M(K(Im, L33), L1n, K(Im, L33))),
         M(L1n, K(Im, Sn), L1n)),
        ("v", M(L1, K(L22, In), L1), M(K(L23, In), K(In, Sn), K(L32, In))),
        ("vi", M(L1, K(L23, In), K(In, L32)), M(K(L22, In), Smn)),
        ("vii", M(L1, K(L23, In), K(In, L33)), M(K(L23, In), K(In, Sn), K(L33, In))),
        ("viii", M(K(In, L23), K(L32, In), L1), M(SmnT, K(L22, In))),
        ("ix", A(K(In, M(L22, L22)), M(K(In, L23), K(L33, In), K(In, L32))),
         ops.zeros(m * n, m * n)),
        ("x", A(K(In, M(L22, L23)), M(K(In, L23), K(L33, In), K(In, L33))),
         M(SmnT, K(L23, In))),
        ("xi", M(K(In, L33), K(L32, In), L1), M(K(L33, In), K(In, Sn), K(L32, In))),
        ("xii", A(K(In, M(L32, L22)), M(K(In, L33), K(L33, In), K(In, L32))),
         M(K(L32, In), Smn)),
        ("xiii", A(K(In, M(L32, L23)), M(K(In, L33), K(L33, In), K(In, L33))),
         M(K(L33, In), K(In, Sn), K(L33, In))),
    ]
    return eqs


@dataclass
class BlockReport:
    case: str
    results: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def __bool__(self):
        return self.ok

    def failed(self) -> list[str]:
        return [r.label for r in self.results if not r.ok]


def check_block_system(assoc: Associator) -> BlockReport:
    m, n = assoc.rule.m, assoc.rule.n
    case = "m>0,n=0" if n == 0 else ("m=0,n>0" if m == 0 else "m,n>0")
    eqs = block_equations(MatrixOps(assoc.field), m, n, assoc.lam1, assoc.lam22,
                          assoc.lam23, assoc.lam32, assoc.lam33)
    report = BlockReport(case)
    for label, lhs, rhs in eqs:
        if lhs.shape != rhs.shape:
            raise ShapeError(f"equation ({label}) sides have shapes {lhs.shape}, {rhs.shape}")
        res = lhs - rhs
        report.results.append(CheckResult(res.is_zero(), res, label))
    return report


def pentagon_report(assoc: Associator) -> dict:
    """All three formulations, summarised."""
    ass4 = check_ass4_all(assoc)
    be = check_biedenharn_elliot_all(assoc)
    blocks = check_block_system(assoc)
    return {
        "ass4": {r.label: r.ok for r in ass4},
        "biedenharn_elliot": {r.label: r.ok for r in be},
        "block_system": {r.label: r.ok for r in blocks.results},
        "ass4_ok": all(r.ok for r in ass4),
        "biedenharn_elliot_ok": all(r.ok for r in be),
        "block_system_ok": blocks.ok,
        "invertible": assoc.is_invertible(),
    }
