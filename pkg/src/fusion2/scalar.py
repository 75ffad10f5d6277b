"""Exact scalar fields: the rationals, prime fields, and quadratic extensions.

A field is described by a :class:`FieldSpec`.  Elements are immutable
:class:`Scalar` values ``a + b*t`` where ``t`` is a root of the monic
extension modulus ``t^2 + u*t + v`` (``b`` is always zero without an
extension).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Union

__all__ = [
    "FieldSpec",
    "FieldError",
    "Scalar",
    "field_char",
    "parse_field",
    "solve_monic_quadratic",
    "QuadraticRoots",
]


class FieldError(ValueError):
    """Raised for invalid field specifications or cross-field arithmetic."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, isqrt(p) + 1, 2))


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


@dataclass(frozen=True)
class FieldSpec:
    """``p == 0`` means the rationals.  ``u``/``v`` are the modulus coefficients.

    Over the rationals the modulus coefficients must be integers; over a
    prime field they are stored as least residues.
    """

    p: int = 0
    u: int | None = None
    v: int | None = None

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if (self.u is None) != (self.v is None):
            raise FieldError("extension needs both u and v")
        if self.u is None:
            return
        if self.p:
            object.__setattr__(self, "u", self.u % self.p)
            object.__setattr__(self, "v", self.v % self.p)
            p, u, v = self.p, self.u, self.v
            if any((x * x + u * x + v) % p == 0 for x in range(p)):
                raise FieldError(f"{_poly_text(u, v)} is reducible over F{p}")
        else:
            if int(self.u) != self.u or int(self.v) != self.v:
                raise FieldError("rational moduli must have integer coefficients")
            if _is_rational_square(Fraction(self.u * self.u - 4 * self.v)):
                raise FieldError(f"{_poly_text(self.u, self.v)} is reducible over Q")

    # -- basic properties -------------------------------------------------
    @property
    def char(self) -> int:
        return self.p

    @property
    def is_extension(self) -> bool:
        return self.u is not None

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    @property
    def degree(self) -> int:
        return 2 if self.is_extension else 1

    @property
    def order(self) -> int | None:
        return self.p ** self.degree if self.p else None

    @property
    def base(self) -> "FieldSpec":
        return FieldSpec(self.p)

    def extend(self, u: int, v: int) -> "FieldSpec":
        if self.is_extension:
            raise FieldError("only one quadratic extension is supported")
        return FieldSpec(self.p, u, v)

    # -- element constructors --------------------------------------------
    def __call__(self, a=0, b=0) -> "Scalar":
        return Scalar(self, a, b)

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, 0)

    @property
    def one(self) -> "Scalar":
        return Scalar(self, 1)

    @property
    def gen(self) -> "Scalar":
        if not self.is_extension:
            raise FieldError("field has no extension root")
        return Scalar(self, 0, 1)

    def elements(self) -> Iterator["Scalar"]:
        """All elements in residue order: index ``a + p*b``."""
        if not self.p:
            raise FieldError("cannot enumerate an infinite field")
        for b in range(self.p if self.is_extension else 1):
            for a in range(self.p):
                yield Scalar(self, a, b)

    def from_index(self, index: int) -> "Scalar":
        """Inverse of :meth:`Scalar.index`."""
        if not self.p or not 0 <= index < self.order:
            raise FieldError(f"no element with index {index} in {self}")
        return Scalar(self, index % self.p, index // self.p)

    def units(self) -> Iterator["Scalar"]:
        for x in self.elements():
            if x:
                yield x

    def parse(self, text: str) -> "Scalar":
        return Scalar.parse(text, self)

    def __str__(self) -> str:
        head = f"F{self.p}" if self.p else "Q"
        if not self.is_extension:
            return head
        if self.u == 0:
            rhs = (-self.v) % self.p if self.p else -self.v
            return f"{head}[t^2={rhs}]"
        return f"{head}[{_poly_text(self.u, self.v)}]"


def _poly_text(u: int, v: int) -> str:
    out = "t^2"
    for coeff, mono in ((u, "t"), (v, "")):
        if coeff == 0:
            continue
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if mono and mag == 1:
            out += f"{sign}{mono}"
        elif mono:
            out += f"{sign}{mag}*{mono}"
        else:
            out += f"{sign}{mag}"
    return out


_FIELD_RE = re.compile(r"^\s*(Q|F(\d+))\s*(?:\[(.*)\])?\s*$")
_TERM_RE = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(t(?:\^(\d+))?)?")


def _linear_terms(text: str) -> dict[int, Fraction]:
    """Parse a polynomial in ``t`` of degree <= 2 into {degree: coeff}."""
    s = text.replace(" ", "")
    if not s:
        raise FieldError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise FieldError(f"cannot parse {text!r} at column {pos + 1}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        deg = 0
        if m.group(3):
            deg = int(m.group(4)) if m.group(4) else 1
        if deg > 2:
            raise FieldError(f"degree {deg} term in {text!r}")
        coeffs[deg] = coeffs.get(deg, Fraction(0)) + sign * c
        pos = m.end()
    return coeffs


def parse_field(text: str) -> FieldSpec:
    """Parse ``Q``, ``Q[t^2=5]``, ``F5``, ``F2[t^2+t+1]``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise FieldError(f"unrecognised field spec {text!r}")
    p = int(m.group(2)) if m.group(2) else 0
    ext = m.group(3)
    if ext is None:
        return FieldSpec(p)
    if "=" in ext:
        lhs, rhs = ext.split("=", 1)
        left = _linear_terms(lhs)
        right = _linear_terms(rhs)
        coeffs = {d: left.get(d, 0) - right.get(d, 0) for d in (0, 1, 2)}
    else:
        coeffs = {d: c for d, c in _linear_terms(ext).items()}
    lead = coeffs.get(2, 0)
    if lead != 1:
        raise FieldError(f"modulus in {text!r} must be monic of degree 2")
    u, v = Fraction(coeffs.get(1, 0)), Fraction(coeffs.get(0, 0))
    if p:
        u = u.numerator * pow(u.denominator, -1, p)
        v = v.numerator * pow(v.denominator, -1, p)
    elif u.denominator != 1 or v.denominator != 1:
        raise FieldError("rational moduli must have integer coefficients")
    return FieldSpec(p, int(u), int(v))


def field_char(spec: FieldSpec) -> int:
    return spec.p


Coercible = Union["Scalar", int, Fraction]


class Scalar:
    """Immutable element ``a + b*t`` of a :class:`FieldSpec`."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: FieldSpec, a=0, b=0):
        if b and not field.is_extension:
            raise FieldError(f"{field} has no extension root")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", self._base(field, a))
        object.__setattr__(self, "b", self._base(field, b))

    @staticmethod
    def _base(field: FieldSpec, x):
        if field.p:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, field.p) % field.p
            return int(x) % field.p
        return Fraction(x)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _coerce(self, other: Coercible) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"mixing {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(self.field, other)
        return NotImplemented

    def _norm_base(self, x):
        return x % self.field.p if self.field.p else x

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        f = self.field
        if not f.is_extension:
            return Scalar(f, self.a * o.a)
        # t^2 = -u t - v
        bb = self.b * o.b
        return Scalar(f, self.a * o.a - f.v * bb, self.a * o.b + self.b * o.a - f.u * bb)

    __rmul__ = __mul__

    def norm(self):
        """Field norm down to the base: a^2 - u a b + v b^2."""
        f = self.field
        if not f.is_extension:
            return self.a
        return self._norm_base(self.a * self.a - f.u * self.a * self.b + f.v * self.b * self.b)

    def conjugate(self) -> "Scalar":
        f = self.field
        if not f.is_extension:
            return self
        # the other root is -u - t
        return Scalar(f, self.a - f.u * self.b, -self.b)

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        if not f.is_extension:
            return Scalar(f, pow(int(self.a), -1, f.p) if f.p else 1 / self.a)
        nrm = self.norm()
        if f.p:
            ninv = pow(int(nrm), -1, f.p)
        else:
            ninv = 1 / nrm
        c = self.conjugate()
        return Scalar(f, c.a * ninv, c.b * ninv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison / hashing ----------------------------------------------
    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(self.field, other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field == other.field and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def sort_key(self):
        return (self.b, self.a)

    def index(self) -> int:
        """Residue-order position for finite fields."""
        if not self.field.p:
            raise FieldError("index is defined only for finite fields")
        return int(self.a) + self.field.p * int(self.b)

    # -- text --------------------------------------------------------------
    @staticmethod
    def _base_text(x) -> str:
        if isinstance(x, Fraction):
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x)

    def __str__(self) -> str:
        if not self.b:
            return self._base_text(self.a)
        bt = "t" if self.b == 1 else (
            "-t" if (not self.field.p and self.b == -1) else f"{self._base_text(self.b)}*t")
        if not self.a:
            return bt
        sep = "" if bt.startswith("-") else "+"
        return f"{self._base_text(self.a)}{sep}{bt}"

    def __repr__(self) -> str:
        return f"Scalar({self.field}, {self})"

    @classmethod
    def parse(cls, text: str, field: FieldSpec) -> "Scalar":
        s = str(text).strip()
        try:
            terms = _linear_terms(s)
        except FieldError as exc:
            raise FieldError(f"bad scalar {text!r}: {exc}") from None
        if terms.get(2):
            raise FieldError(f"bad scalar {text!r}: quadratic term")
        return cls(field, terms.get(0, 0), terms.get(1, 0))


class QuadraticRoots(tuple):
    """Roots of a monic quadratic; ``double`` flags a repeated root."""

    double: bool

    def __new__(cls, roots, double=False):
        obj = super().__new__(cls, roots)
        obj.double = double
        return obj


def _base_sqrt(field: FieldSpec, x):
    """Square root of a base-field element inside the base field, or None."""
    if field.p:
        x %= field.p
        for r in range(field.p):
            if r * r % field.p == x:
                return r
        return None
    x = Fraction(x)
    if not _is_rational_square(x):
        return None
    return Fraction(isqrt(x.numerator), isqrt(x.denominator))


def _sqrt(d: Scalar) -> Scalar | None:
    f = d.field
    if not d:
        return f.zero
    if f.p:
        if f.p == 2 or f.order <= 1 << 12:
            for r in f.elements():
                if r * r == d:
                    return r
            return None
    if not f.is_extension:
        r = _base_sqrt(f, d.a)
        return None if r is None else f(r)
    # (x + y t)^2 = x^2 - v y^2 + (2xy - u y^2) t; solve over Q by cases
    # y == 0: x^2 = d (needs d.b == 0)
    if not d.b:
        r = _base_sqrt(f, d.a)
        if r is not None:
            return f(r)
        # root c*(2t+u) has square c^2 * (u^2 - 4v), a base element
        c2 = (f(d.a) / f(f.u * f.u - 4 * f.v)).a
        c = _base_sqrt(f, c2)
        if c is not None:
            return f(c * f.u, 2 * c)
    # otherwise use the norm: N(x+yt)^2 = N(d); x determined from trace
    nd = d.norm()
    sn = _base_sqrt(f, nd)
    if sn is None:
        return None
    # s = x+yt with s*conj(s) = +-sn, s + conj(s) = 2x - u y
    # (s + conj(s))^2 = d + conj(d) + 2 N(s)
    tr_d = 2 * d.a - f.u * d.b
    for ns in (sn, -sn):
        tr2 = tr_d + 2 * ns
        tr = _base_sqrt(f, tr2)
        if tr is None or tr == 0:
            continue
        # s = (d + N(s)) / tr  since s^2 + N(s) = s (s + conj s)
        cand = (d + f(ns)) / f(tr)
        if cand * cand == d:
            return cand
    return None


def solve_monic_quadratic(u: Scalar, v: Scalar, spec: FieldSpec) -> QuadraticRoots:
    """Roots of ``x^2 + u x + v`` in ``spec``, sorted by residue/sort order."""
    u = spec(0) + u
    v = spec(0) + v
    if spec.p == 2:
        roots = [r for r in spec.elements() if r * r + u * r + v == spec.zero]
        return QuadraticRoots(sorted(roots, key=Scalar.sort_key),
                              double=len(roots) == 1 and not u)
    disc = u * u - 4 * v
    r = _sqrt(disc)
    if r is None:
        return QuadraticRoots(())
    half = spec(1) / 2
    if not r:
        return QuadraticRoots((-u * half,), double=True)
    roots = sorted({(-u + r) * half, (-u - r) * half}, key=Scalar.sort_key)
    return QuadraticRoots(roots)
