"""Rank-two fusion rules ``r2 * r2 = m * 1 + n * r2`` and the object tensor."""
from __future__ import annotations

from dataclasses import dataclass

from .blockmat import E1, E2, Shape

__all__ = ["FusionRule", "structure_shape", "obj_tensor"]


@dataclass(frozen=True, order=True)
class FusionRule:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("fusion multiplicities must be nonnegative")
        if self.m + self.n == 0:
            raise ValueError("r2^2 must be nonzero (m + n > 0)")

    def c(self, i: int, j: int) -> Shape:
        """Structure shape ``c_ij`` (indices 1 or 2)."""
        if i not in (1, 2) or j not in (1, 2):
            raise ValueError(f"rank-two index out of range: {(i, j)}")
        if i == 1:
            return E1 if j == 1 else E2
        if j == 1:
            return E2
        return Shape(self.m, self.n)

    def c3(self, i: int, j: int, k: int) -> int:
        """Structure constant ``c_ijk``: multiplicity of e_k in e_i (x) e_j."""
        return self.c(i, j)[k]

    def tensor(self, a: Shape, b: Shape) -> Shape:
        return obj_tensor(self, a, b)

    def power(self, *idx: int) -> Shape:
        """``e_{i1} (x) e_{i2} (x) ...`` for simple indices."""
        acc = E1 if idx[0] == 1 else E2
        for i in idx[1:]:
            acc = obj_tensor(self, acc, E1 if i == 1 else E2)
        return acc

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n}

    @classmethod
    def from_json(cls, d: dict) -> "FusionRule":
        return cls(int(d["m"]), int(d["n"]))

    def __str__(self):
        return f"(m={self.m}, n={self.n})"


def structure_shape(rule: FusionRule, i: int, j: int) -> Shape:
    return rule.c(i, j)


def obj_tensor(rule: FusionRule, a: Shape, b: Shape) -> Shape:
    out = Shape(0, 0)
    for i in (1, 2):
        for j in (1, 2):
            k = a[i] * b[j]
            if k:
                out = out + k * rule.c(i, j)
    return out
