"""Dense exact matrices and the (m,s)-type block calculus over A = F x F.

:class:`Matrix` stores a matrix over a :class:`~fusion2.scalar.FieldSpec`
as integer component arrays: entry ``(i, j)`` equals
``(c0[i, j] + c1[i, j] * t) / den``.  Prime fields keep ``den == 1`` and
reduce entries mod p; the rationals keep a common denominator.

The Kronecker product follows the block convention in which the *left*
factor varies fastest: ``kron(X, Y)`` has blocks ``X * y_ij``.  This is
``numpy.kron(Y, X)`` in the usual convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .scalar import FieldError, FieldSpec, Scalar

__all__ = [
    "Matrix",
    "Shape",
    "TypedMatrix",
    "ShapeError",
    "identity_typed",
    "vstack_typed",
    "hstack_typed",
    "perm_matrix",
    "pi_assemble",
    "kron",
    "epsilon",
    "unit_matrix",
    "swap_block",
    "swap_rect",
]


class ShapeError(ValueError):
    """Raised when matrix or typed-matrix shapes do not conform."""


def _small_prime(p: int) -> bool:
    return 0 < p < (1 << 20)


class Matrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "comps", "den")

    def __init__(self, field: FieldSpec, comps, den: int = 1, _normalized=False):
        self.field = field
        self.comps = tuple(comps)
        self.den = den
        if len(self.comps) != field.degree:
            raise FieldError("component count does not match the field degree")
        if not _normalized:
            self._normalize()

    # -- construction --------------------------------------------------------
    @staticmethod
    def _dtype(field: FieldSpec):
        return np.int64 if _small_prime(field.p) else object

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        dt = cls._dtype(field)
        return cls(field, [np.zeros((rows, cols), dtype=dt) for _ in range(field.degree)],
                   1, _normalized=True)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z = cls.zeros(field, n, n)
        z.comps[0][np.arange(n), np.arange(n)] = 1
        return z

    @classmethod
    def from_int_array(cls, field: FieldSpec, arr) -> "Matrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            arr = arr.reshape(arr.shape[0] if arr.ndim else 1, -1)
        dt = cls._dtype(field)
        c0 = arr.astype(dt) if dt is object else np.asarray(arr, dtype=np.int64)
        if dt is object:
            c0 = np.vectorize(int, otypes=[object])(c0) if c0.size else c0
        comps = [c0] + [np.zeros_like(c0) for _ in range(field.degree - 1)]
        return cls(field, comps, 1)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None
                  ) -> "Matrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else (ncols or 0)
        if any(len(r) != nc for r in rows):
            raise ShapeError("ragged rows")
        vals = [[_as_scalar(field, x) for x in r] for r in rows]
        dt = cls._dtype(field)
        if field.p:
            comps = [np.zeros((nr, nc), dtype=dt) for _ in range(field.degree)]
            for i, r in enumerate(vals):
                for j, x in enumerate(r):
                    comps[0][i, j] = x.a
                    if field.degree == 2:
                        comps[1][i, j] = x.b
            return cls(field, comps, 1)
        den = 1
        for r in vals:
            for x in r:
                for q in (x.a, x.b):
                    den = den * q.denominator // gcd(den, q.denominator)
        comps = [np.zeros((nr, nc), dtype=object) for _ in range(field.degree)]
        for i, r in enumerate(vals):
            for j, x in enumerate(r):
                comps[0][i, j] = int(x.a * den)
                if field.degree == 2:
                    comps[1][i, j] = int(x.b * den)
        if nr * nc == 0:
            comps = [np.zeros((nr, nc), dtype=object) for _ in range(field.degree)]
        return cls(field, comps, den)

    def _normalize(self):
        f = self.field
        if f.p:
            self.comps = tuple(np.mod(c, f.p) for c in self.comps)
            self.den = 1
            return
        comps = [np.asarray(c, dtype=object) for c in self.comps]
        den = int(self.den)
        if den < 0:
            den = -den
            comps = [-c for c in comps]
        g = den
        for c in comps:
            for x in c.flat:
                if g == 1:
                    break
                g = gcd(g, int(x))
        if g > 1:
            comps = [c // g for c in comps]
            den //= g
        self.comps = tuple(comps)
        self.den = den

    # -- basic access ------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.comps[0].shape

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        f = self.field
        if f.p:
            return Scalar(f, int(self.comps[0][i, j]),
                          int(self.comps[1][i, j]) if f.degree == 2 else 0)
        a = Fraction(int(self.comps[0][i, j]), self.den)
        b = Fraction(int(self.comps[1][i, j]), self.den) if f.degree == 2 else 0
        return Scalar(f, a, b)

    def to_rows(self) -> list[list[Scalar]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def to_text_rows(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.to_rows()]

    def int_array(self) -> np.ndarray:
        """Entries as integers (prime fields without extension only)."""
        if not self.field.p or self.field.is_extension:
            raise FieldError("int_array needs a prime field")
        return np.asarray(self.comps[0], dtype=np.int64)

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.to_text_rows()})"

    # -- algebra -----------------------------------------------------------
    def _check_field(self, other: "Matrix"):
        if other.field != self.field:
            raise FieldError(f"mixing {self.field} and {other.field}")

    def _combine(self, other: "Matrix", sign: int) -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        if self.field.p:
            return Matrix(self.field, [a + sign * b for a, b in zip(self.comps, other.comps)])
        l = self.den * other.den // gcd(self.den, other.den)
        fa, fb = l // self.den, l // other.den
        return Matrix(self.field, [a * fa + sign * b * fb
                                   for a, b in zip(self.comps, other.comps)], l)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [-c for c in self.comps], self.den)

    def _bilinear(self, other: "Matrix", op) -> "Matrix":
        self._check_field(other)
        f = self.field
        if f.degree == 1:
            return Matrix(f, [op(self.comps[0], other.comps[0])], self.den * other.den)
        a0, a1 = self.comps
        b0, b1 = other.comps
        hh = op(a1, b1)
        if f.p:
            hh = np.mod(hh, f.p)
        c0 = op(a0, b0) - f.v * hh
        c1 = op(a0, b1) + op(a1, b0) - f.u * hh
        return Matrix(f, [c0, c1], self.den * other.den)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return self._bilinear(other, np.dot)

    def kron(self, other: "Matrix") -> "Matrix":
        """Left-fastest Kronecker product: blocks are ``self * other[i, j]``."""
        return self._bilinear(other, lambda x, y: _np_kron(y, x))

    def scale(self, s: Scalar | int) -> "Matrix":
        s = _as_scalar(self.field, s)
        return Matrix.from_rows(self.field, [[s]])._scalar_times(self)

    def _scalar_times(self, m: "Matrix") -> "Matrix":
        return self._bilinear(m, lambda x, y: x[0, 0] * y)

    def __mul__(self, s):
        if isinstance(s, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(s)

    __rmul__ = __mul__

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, [c.T.copy() for c in self.comps], self.den, _normalized=True)

    def __pow__(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Matrix.identity(self.field, self.rows), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    # -- comparison ----------------------------------------------------------
    def is_zero(self) -> bool:
        return all(not np.any(c != 0) for c in self.comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.den == other.den
                and all(np.array_equal(a, b) for a, b in zip(self.comps, other.comps)))

    def __hash__(self):
        return hash((self.field, self.shape, self.den,
                     tuple(tuple(int(x) for x in c.flat) for c in self.comps)))

    def sort_key(self) -> str:
        return repr(self.to_text_rows())

    # -- slicing and stacking --------------------------------------------------
    def sub(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        """Rows ``r0:r1`` and columns ``c0:c1`` (0-based, half-open)."""
        return Matrix(self.field, [c[r0:r1, c0:c1].copy() for c in self.comps], self.den)

    @staticmethod
    def _aligned(mats: Sequence["Matrix"]):
        f = mats[0].field
        for m in mats:
            if m.field != f:
                raise FieldError("mixing fields in a stack")
        if f.p:
            return f, [m.comps for m in mats], 1
        l = 1
        for m in mats:
            l = l * m.den // gcd(l, m.den)
        return f, [[c * (l // m.den) for c in m.comps] for m in mats], l

    @staticmethod
    def vstack(mats: Sequence["Matrix"]) -> "Matrix":
        if len({m.cols for m in mats}) > 1:
            raise ShapeError("vstack needs equal column counts")
        f, comps, den = Matrix._aligned(mats)
        return Matrix(f, [np.vstack([c[k] for c in comps]) for k in range(f.degree)], den)

    @staticmethod
    def hstack(mats: Sequence["Matrix"]) -> "Matrix":
        if len({m.rows for m in mats}) > 1:
            raise ShapeError("hstack needs equal row counts")
        f, comps, den = Matrix._aligned(mats)
        return Matrix(f, [np.hstack([c[k] for c in comps]) for k in range(f.degree)], den)

    @staticmethod
    def block_diag(mats: Sequence["Matrix"]) -> "Matrix":
        f = mats[0].field
        r = sum(m.rows for m in mats)
        c = sum(m.cols for m in mats)
        out = Matrix.zeros(f, r, c)
        row = col = 0
        for m in mats:
            out = out._paste(m, row, col)
            row += m.rows
            col += m.cols
        return out

    def _paste(self, m: "Matrix", row: int, col: int) -> "Matrix":
        f, (a, b), den = Matrix._aligned([self, m])
        comps = [x.copy() for x in a]
        for k in range(f.degree):
            comps[k][row:row + m.rows, col:col + m.cols] = b[k]
        return Matrix(f, comps, den)

    # -- Gaussian elimination ----------------------------------------------------
    def _echelon(self):
        rows = self.to_rows()
        nr, nc = self.rows, self.cols
        rank, sign, det = 0, 1, self.field.one
        for col in range(nc):
            piv = next((r for r in range(rank, nr) if rows[r][col]), None)
            if piv is None:
                continue
            if piv != rank:
                rows[piv], rows[rank] = rows[rank], rows[piv]
                sign = -sign
            inv = rows[rank][col].inverse()
            det = det * rows[rank][col]
            for r in range(nr):
                if r != rank and rows[r][col]:
                    fac = rows[r][col] * inv
                    rows[r] = [x - fac * y for x, y in zip(rows[r], rows[rank])]
            rows[rank] = [x * inv for x in rows[rank]]
            rank += 1
        return rows, rank, det * sign

    def rank(self) -> int:
        return self._echelon()[1]

    def det(self) -> Scalar:
        if self.rows != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        _, rank, det = self._echelon()
        return det if rank == self.rows else self.field.zero

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        n = self.rows
        if n != self.cols:
            raise ShapeError("inverse of a non-square matrix")
        aug = Matrix.hstack([self, Matrix.identity(self.field, n)])
        rows, rank, _ = aug._echelon()
        if any(not rows[i][i] for i in range(n)) or n and rank < n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix.from_rows(self.field, [r[n:] for r in rows], ncols=n)


def _np_kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def _as_scalar(field: FieldSpec, x) -> Scalar:
    if isinstance(x, Scalar):
        if x.field != field:
            raise FieldError(f"scalar from {x.field} used in {field}")
        return x
    if isinstance(x, str):
        return Scalar.parse(x, field)
    return Scalar(field, x)


def kron(x: Matrix, y: Matrix) -> Matrix:
    return x.kron(y)


def epsilon(field: FieldSpec, n: int, i: int) -> Matrix:
    """Unit row vector of length n with a 1 at (1-based) position i."""
    return Matrix.from_rows(field, [[1 if j == i else 0 for j in range(1, n + 1)]])


def unit_matrix(field: FieldSpec, c: int, b: int, i: int, j: int) -> Matrix:
    """``I^{[c,b]}_{i,j}``: the c x b matrix with a single 1 at (i, j)."""
    return epsilon(field, c, i).T @ epsilon(field, b, j)


def swap_rect(field: FieldSpec, c: int, b: int) -> Matrix:
    """The bc x bc flip matrix: block (r, s) equals ``I^{[c,b]}_{s,r}``."""
    if c < 0 or b < 0:
        raise ShapeError("negative dimension")
    out = np.zeros((b * c, b * c), dtype=np.int64)
    for r in range(b):
        for s in range(c):
            out[r * c + s, s * b + r] = 1
    return Matrix.from_int_array(field, out)


def swap_block(field: FieldSpec, n: int) -> Matrix:
    """``I_[n]`` built from its defining sum of unit-matrix Kronecker products."""
    total = Matrix.zeros(field, n * n, n * n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            total = total + unit_matrix(field, n, n, i, j).kron(unit_matrix(field, n, n, j, i))
    return total


# ---------------------------------------------------------------------------
# shapes and (m,s)-type matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Shape:
    """An object of N^2: multiplicities of the two simple summands."""

    m1: int = 0
    m2: int = 0

    def __post_init__(self):
        if self.m1 < 0 or self.m2 < 0:
            raise ShapeError(f"negative shape {self}")

    def __add__(self, other: "Shape") -> "Shape":
        return Shape(self.m1 + other.m1, self.m2 + other.m2)

    def __rmul__(self, k: int) -> "Shape":
        return Shape(k * self.m1, k * self.m2)

    def __getitem__(self, i: int) -> int:
        """1-based component access."""
        if i == 1:
            return self.m1
        if i == 2:
            return self.m2
        raise IndexError(i)

    def __iter__(self):
        yield self.m1
        yield self.m2

    @property
    def size(self) -> int:
        return self.m1 + self.m2

    def __str__(self):
        return f"({self.m1},{self.m2})"


E1 = Shape(1, 0)
E2 = Shape(0, 1)
ZERO = Shape(0, 0)


class TypedMatrix:
    """Block-diagonal ``diag(X1 e1, X2 e2)`` mapping shape ``inp`` to ``out``.

    ``X1`` is ``out.m1 x inp.m1`` and ``X2`` is ``out.m2 x inp.m2``.
    """

    __slots__ = ("out", "inp", "blocks")

    def __init__(self, out: Shape, inp: Shape, b1: Matrix, b2: Matrix):
        if b1.shape != (out.m1, inp.m1) or b2.shape != (out.m2, inp.m2):
            raise ShapeError(
                f"blocks {b1.shape}, {b2.shape} do not fit type ({out}, {inp})")
        if b1.field != b2.field:
            raise FieldError("blocks over different fields")
        self.out = out
        self.inp = inp
        self.blocks = (b1, b2)

    @property
    def field(self) -> FieldSpec:
        return self.blocks[0].field

    def block(self, i: int) -> Matrix:
        return self.blocks[i - 1]

    @classmethod
    def zeros(cls, field: FieldSpec, out: Shape, inp: Shape) -> "TypedMatrix":
        return cls(out, inp, Matrix.zeros(field, out.m1, inp.m1),
                   Matrix.zeros(field, out.m2, inp.m2))

    def __matmul__(self, other: "TypedMatrix") -> "TypedMatrix":
        if self.inp != other.out:
            raise ShapeError(f"cannot compose {self.out}<-{self.inp} with "
                             f"{other.out}<-{other.inp}")
        return TypedMatrix(self.out, other.inp, self.blocks[0] @ other.blocks[0],
                           self.blocks[1] @ other.blocks[1])

    def __add__(self, other: "TypedMatrix") -> "TypedMatrix":
        if (self.out, self.inp) != (other.out, other.inp):
            raise ShapeError("adding typed matrices of different type")
        return TypedMatrix(self.out, self.inp, self.blocks[0] + other.blocks[0],
                           self.blocks[1] + other.blocks[1])

    def __sub__(self, other: "TypedMatrix") -> "TypedMatrix":
        return self + (-other)

    def __neg__(self) -> "TypedMatrix":
        return TypedMatrix(self.out, self.inp, -self.blocks[0], -self.blocks[1])

    def scale(self, s) -> "TypedMatrix":
        return TypedMatrix(self.out, self.inp, self.blocks[0].scale(s), self.blocks[1].scale(s))

    @property
    def T(self) -> "TypedMatrix":
        return TypedMatrix(self.inp, self.out, self.blocks[0].T, self.blocks[1].T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TypedMatrix):
            return NotImplemented
        return (self.out, self.inp) == (other.out, other.inp) and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.out, self.inp, self.blocks))

    def is_zero(self) -> bool:
        return self.blocks[0].is_zero() and self.blocks[1].is_zero()

    def is_invertible(self) -> bool:
        return (self.out == self.inp and (self.out.m1 == 0 or self.blocks[0].is_invertible())
                and (self.out.m2 == 0 or self.blocks[1].is_invertible()))

    def inverse(self) -> "TypedMatrix":
        inv = [b.inverse() if b.rows else b for b in self.blocks]
        return TypedMatrix(self.inp, self.out, *inv)

    def to_plain(self) -> Matrix:
        """The full |out| x |inp| block-diagonal matrix (zero rows for empty shapes)."""
        b1, b2 = self.blocks
        top = Matrix.hstack([b1, Matrix.zeros(self.field, b1.rows, b2.cols)])
        bot = Matrix.hstack([Matrix.zeros(self.field, b2.rows, b1.cols), b2])
        return Matrix.vstack([top, bot])

    @classmethod
    def from_plain(cls, out: Shape, inp: Shape, m: Matrix) -> "TypedMatrix":
        if m.shape != (out.size, inp.size):
            raise ShapeError("plain matrix has the wrong size")
        b1 = m.sub(0, out.m1, 0, inp.m1)
        b2 = m.sub(out.m1, out.size, inp.m1, inp.size)
        t = cls(out, inp, b1, b2)
        if t.to_plain() != m:
            raise ShapeError("matrix is not block diagonal for this type")
        return t

    def to_json(self) -> dict:
        return {"shape_out": list(self.out), "shape_in": list(self.inp),
                "block1": self.blocks[0].to_text_rows(), "block2": self.blocks[1].to_text_rows()}

    @classmethod
    def from_json(cls, d: dict, field: FieldSpec) -> "TypedMatrix":
        out, inp = Shape(*d["shape_out"]), Shape(*d["shape_in"])
        b1 = Matrix.from_rows(field, [[field.parse(x) for x in r] for r in d["block1"]], inp.m1)
        b2 = Matrix.from_rows(field, [[field.parse(x) for x in r] for r in d["block2"]], inp.m2)
        return cls(out, inp, b1, b2)

    def __repr__(self):
        return (f"TypedMatrix(out={self.out}, inp={self.inp}, "
                f"block1={self.blocks[0].to_text_rows()}, block2={self.blocks[1].to_text_rows()})")


def identity_typed(field: FieldSpec, m: Shape) -> TypedMatrix:
    """``E_m``; ``E_(0,0)`` is the empty matrix."""
    return TypedMatrix(m, m, Matrix.identity(field, m.m1), Matrix.identity(field, m.m2))


def vstack_typed(x: TypedMatrix, y: TypedMatrix) -> TypedMatrix:
    if x.inp != y.inp:
        raise ShapeError("vertical sum needs equal domain shapes")
    return TypedMatrix(x.out + y.out, x.inp, Matrix.vstack([x.blocks[0], y.blocks[0]]),
                       Matrix.vstack([x.blocks[1], y.blocks[1]]))


def hstack_typed(x: TypedMatrix, y: TypedMatrix) -> TypedMatrix:
    if x.out != y.out:
        raise ShapeError("horizontal sum needs equal codomain shapes")
    return TypedMatrix(x.out, x.inp + y.inp, Matrix.hstack([x.blocks[0], y.blocks[0]]),
                       Matrix.hstack([x.blocks[1], y.blocks[1]]))


def _perm_pair(field: FieldSpec, m: Shape, mm: Shape) -> Matrix:
    # rows: (m1 | m'1 | m2 | m'2) gathered from the stacked order (m1, m2, m'1, m'2)
    n = m.size + mm.size
    src = ([i for i in range(m.m1)]
           + [m.size + i for i in range(mm.m1)]
           + [m.m1 + i for i in range(m.m2)]
           + [m.size + mm.m1 + i for i in range(mm.m2)])
    out = np.zeros((n, n), dtype=np.int64)
    out[np.arange(n), src] = 1
    return Matrix.from_int_array(field, out)


def perm_matrix(field: FieldSpec, shapes: Sequence[Shape]) -> Matrix:
    """``P_{m1,...,mr}`` by the recursive definition."""
    shapes = list(shapes)
    if not shapes:
        raise ShapeError("perm_matrix needs at least one shape")
    if len(shapes) == 1:
        return Matrix.identity(field, shapes[0].size)
    if len(shapes) == 2:
        return _perm_pair(field, shapes[0], shapes[1])
    head = shapes[:-1]
    total = head[0]
    for s in head[1:]:
        total = total + s
    inner = Matrix.block_diag([perm_matrix(field, head),
                               Matrix.identity(field, shapes[-1].size)])
    return _perm_pair(field, total, shapes[-1]) @ inner


def pi_assemble(grid: Sequence[Sequence[TypedMatrix]]) -> TypedMatrix:
    """Assemble a grid of typed matrices: row-wise horizontal sums, then vertical."""
    grid = [list(r) for r in grid]
    if not grid or not grid[0]:
        raise ShapeError("empty grid")
    if len({len(r) for r in grid}) > 1:
        raise ShapeError("ragged grid")
    row_sums = []
    for r in grid:
        acc = r[0]
        for x in r[1:]:
            acc = hstack_typed(acc, x)
        row_sums.append(acc)
    acc = row_sums[0]
    for x in row_sums[1:]:
        acc = vstack_typed(acc, x)
    return acc
