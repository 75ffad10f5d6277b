"""The matrix model of the rank-two category: morphism tensor, phi, bases.

Objects are :class:`~fusion2.blockmat.Shape` values and a morphism
``m -> s`` is a :class:`~fusion2.blockmat.TypedMatrix` with ``out = s`` and
``inp = m``.
"""
from __future__ import annotations

import functools
from typing import Sequence

import numpy as np

from .blockmat import E1, E2, Matrix, Shape, ShapeError, TypedMatrix, identity_typed
from .fusion import FusionRule, obj_tensor
from .scalar import FieldSpec, Scalar

__all__ = [
    "simple",
    "unit_morphism",
    "phi_apply",
    "inclusion",
    "projection",
    "mor_tensor",
    "hom_dim",
]


def simple(i: int) -> Shape:
    return E1 if i == 1 else E2


def unit_morphism(field: FieldSpec, i: int) -> TypedMatrix:
    """The idempotent ``e_i`` seen as the identity of the simple object."""
    return identity_typed(field, simple(i))


def hom_dim(a: Shape, b: Shape) -> int:
    return a.m1 * b.m1 + a.m2 * b.m2


def phi_apply(rule: FusionRule, lam: Sequence[Sequence[Scalar]]) -> dict:
    """Image of ``sum lam[i][j] e_i (x) e_j``: the graded pieces ``lam_ij E_{c_ij}``."""
    out = {}
    for i in (1, 2):
        for j in (1, 2):
            x = lam[i - 1][j - 1]
            c = rule.c(i, j)
            out[(i, j)] = identity_typed(x.field, c).scale(x)
    return out


def inclusion(field: FieldSpec, m: Shape, i: int, k: int) -> TypedMatrix:
    """``X^m_{i,k}``: the k-th copy of ``e_i`` inside ``m`` (1-based k)."""
    if not 1 <= k <= m[i]:
        raise IndexError(f"copy {k} of e_{i} not in {m}")
    col = np.zeros((m[i], 1), dtype=np.int64)
    col[k - 1, 0] = 1
    blocks = [Matrix.zeros(field, m.m1, 0), Matrix.zeros(field, m.m2, 0)]
    blocks[i - 1] = Matrix.from_int_array(field, col)
    return TypedMatrix(m, simple(i), *blocks)


def projection(field: FieldSpec, m: Shape, i: int, k: int) -> TypedMatrix:
    """``Y^m_{i,k}``, the transpose of the inclusion."""
    return inclusion(field, m, i, k).T


@functools.lru_cache(maxsize=1024)
def _grid_rows(rule: FusionRule, x: Shape, y: Shape, k: int) -> dict:
    """Row indices of block k of ``x (x) y`` owned by each component pair (i, j).

    Grid rows run over the rows of the right factor (outer) and the rows of the
    left factor (inner); each contributes ``c_{ij k}`` consecutive rows.
    """
    groups = {(i, j): [] for i in (1, 2) for j in (1, 2)}
    off = 0
    for c in range(y.size):
        j = 1 if c < y.m1 else 2
        for a in range(x.size):
            i = 1 if a < x.m1 else 2
            d = rule.c3(i, j, k)
            groups[(i, j)].extend(range(off, off + d))
            off += d
    return groups


def mor_tensor(rule: FusionRule, x: TypedMatrix, y: TypedMatrix) -> TypedMatrix:
    """Tensor product of morphisms ``x: m1 -> s1`` and ``y: m2 -> s2``."""
    field = x.field
    out = obj_tensor(rule, x.out, y.out)
    inp = obj_tensor(rule, x.inp, y.inp)
    blocks = []
    for k in (1, 2):
        rows = _grid_rows(rule, x.out, y.out, k)
        cols = _grid_rows(rule, x.inp, y.inp, k)
        pieces = []
        for i in (1, 2):
            for j in (1, 2):
                d = rule.c3(i, j, k)
                xi, yj = x.block(i), y.block(j)
                if d == 0 or xi.rows * xi.cols * yj.rows * yj.cols == 0:
                    continue
                piece = Matrix.identity(field, d).kron(xi).kron(yj)
                pieces.append((rows[(i, j)], cols[(i, j)], piece))
        blocks.append(_scatter(field, out[k], inp[k], pieces))
    return TypedMatrix(out, inp, *blocks)


def _scatter(field: FieldSpec, nr: int, nc: int, pieces) -> Matrix:
    if not pieces:
        return Matrix.zeros(field, nr, nc)
    mats = [p[2] for p in pieces]
    f, comps, den = Matrix._aligned(mats)
    dt = Matrix._dtype(field)
    acc = [np.zeros((nr, nc), dtype=dt) for _ in range(field.degree)]
    for (rows, cols, _), cc in zip(pieces, comps):
        ix = np.ix_(np.asarray(rows, dtype=np.intp), np.asarray(cols, dtype=np.intp))
        for t in range(field.degree):
            acc[t][ix] += cc[t]
    return Matrix(field, acc, den)
