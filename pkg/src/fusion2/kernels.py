"""Compiled evaluation of the block equations over a prime field.

The equations from :func:`fusion2.pentagon.block_equations` are recorded
once per ``(m, n, p)`` into a flat register program: constant subterms are
folded, shared subterms are computed once, and the instructions of each
equation are emitted just before its comparison so evaluation can stop at
the first failing equation.  The program is run either by the compiled
extension ``_kernels`` or by the numpy fallback ``_kernels_py``; the choice
is made at import time and can be forced with ``FUSION2_PURE=1``.

Candidates are digit vectors: ``lam1`` row-major followed by ``lam2``
row-major, most significant digit first in lexicographic enumeration.
"""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass

import numpy as np

from .blockmat import swap_rect
from .pentagon import block_equations
from .scalar import FieldSpec

OP_MM, OP_KRON, OP_ADD, OP_EQ = 0, 1, 2, 3

if os.environ.get("FUSION2_PURE", "").strip() not in ("", "0"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _kernels_py as _impl
        BACKEND = "python"

__all__ = ["Program", "compile_program", "BACKEND", "eval_batch", "scan_lex", "scan_random",
           "digits_of_index", "num_digits"]


class _Node:
    __slots__ = ("key", "shape", "value", "reg")

    def __init__(self, key, shape, value=None):
        self.key = key
        self.shape = shape
        self.value = value
        self.reg = -1


class _Recorder:
    """Ops object for :func:`block_equations` that records an expression graph."""

    def __init__(self, p: int):
        self.p = p
        self.memo: dict = {}

    def const(self, arr) -> _Node:
        arr = np.ascontiguousarray(np.mod(np.asarray(arr, dtype=np.int64), self.p))
        key = ("c", arr.shape, arr.tobytes())
        if key not in self.memo:
            self.memo[key] = _Node(key, arr.shape, arr)
        return self.memo[key]

    def _node(self, op, x: _Node, y: _Node, shape) -> _Node:
        if x.value is not None and y.value is not None:
            return self.const(_apply(op, x.value, y.value, self.p))
        key = (op, id(x), id(y))
        if key not in self.memo:
            self.memo[key] = _Node((op, x, y), shape)
        return self.memo[key]

    def I(self, k):
        return self.const(np.eye(k, dtype=np.int64))

    def zeros(self, r, c):
        return self.const(np.zeros((r, c), dtype=np.int64))

    def swap(self, c, b):
        return self.const(swap_rect(FieldSpec(self.p), c, b).int_array())

    def T(self, x):
        if x.value is None:
            raise ValueError("only constant operands can be transposed")
        return self.const(x.value.T)

    def kron(self, x, y):
        return self._node(OP_KRON, x, y, (x.shape[0] * y.shape[0], x.shape[1] * y.shape[1]))

    def mm(self, *xs):
        out = xs[0]
        for y in xs[1:]:
            if out.shape[1] != y.shape[0]:
                raise ValueError(f"non-conformable {out.shape} {y.shape}")
            out = self._node(OP_MM, out, y, (out.shape[0], y.shape[1]))
        return out

    def add(self, x, y):
        if x.shape != y.shape:
            raise ValueError(f"non-conformable sum {x.shape} {y.shape}")
        return self._node(OP_ADD, x, y, x.shape)


def _apply(op, x, y, p):
    if op == OP_MM:
        return np.mod(x @ y, p)
    if op == OP_KRON:
        return np.mod(np.kron(y, x), p)
    return np.mod(x + y, p)


@dataclass(frozen=True)
class Program:
    """A flat register program for one ``(m, n, p)``."""

    m: int
    n: int
    p: int
    labels: tuple
    ndigits: int
    reg_rows: np.ndarray
    reg_cols: np.ndarray
    reg_off: np.ndarray
    init: np.ndarray
    gather_dst: np.ndarray
    gather_src: np.ndarray
    instrs: np.ndarray

    @property
    def size(self) -> int:
        return int(self.init.shape[0])


def num_digits(m: int, n: int) -> int:
    return (m * n) ** 2 + (m + n * n) ** 2


@functools.lru_cache(maxsize=64)
def compile_program(m: int, n: int, p: int) -> Program:
    if not 1 < p < (1 << 20):
        raise ValueError("compiled evaluation needs a prime below 2^20")
    rec = _Recorder(p)
    s = m + n * n
    k1 = (m * n) ** 2
    # inputs and where their entries come from in the digit vector
    inputs = {}

    def inp(name, rows, cols, src):
        node = _Node(("in", name), (rows, cols))
        inputs[name] = (node, src)
        return node

    def lam2_idx(r0, r1, c0, c1):
        return [k1 + r * s + c for r in range(r0, r1) for c in range(c0, c1)]

    L1 = inp("L1", m * n, m * n, list(range(k1)))
    L22 = inp("L22", m, m, lam2_idx(0, m, 0, m))
    L23 = inp("L23", m, n * n, lam2_idx(0, m, m, s))
    L32 = inp("L32", n * n, m, lam2_idx(m, s, 0, m))
    L33 = inp("L33", n * n, n * n, lam2_idx(m, s, m, s))
    eqs = block_equations(rec, m, n, L1, L22, L23, L32, L33)

    regs: list[_Node] = []

    def reg(node):
        if node.reg < 0:
            node.reg = len(regs)
            regs.append(node)
        return node.reg

    for node, _ in inputs.values():
        reg(node)
    instrs = []

    def emit(node):
        if node.reg >= 0:
            return node.reg
        if node.value is not None:
            return reg(node)
        op, x, y = node.key
        a, b = emit(x), emit(y)
        r = reg(node)
        instrs.append((op, r, a, b))
        return r

    labels = []
    for idx, (label, lhs, rhs) in enumerate(eqs):
        a, b = emit(lhs), emit(rhs)
        instrs.append((OP_EQ, idx, a, b))
        labels.append(label)

    rows = np.array([r.shape[0] for r in regs], dtype=np.int64)
    cols = np.array([r.shape[1] for r in regs], dtype=np.int64)
    off = np.zeros(len(regs) + 1, dtype=np.int64)
    off[1:] = np.cumsum(rows * cols)
    init = np.zeros(int(off[-1]), dtype=np.int64)
    for r in regs:
        if r.value is not None:
            init[off[r.reg]:off[r.reg + 1]] = r.value.ravel()
    gdst, gsrc = [], []
    for node, src in inputs.values():
        gdst.extend(range(int(off[node.reg]), int(off[node.reg + 1])))
        gsrc.extend(src)
    return Program(m, n, p, tuple(labels), num_digits(m, n), rows, cols, off[:-1].copy(), init,
                   np.array(gdst, dtype=np.int64), np.array(gsrc, dtype=np.int64),
                   np.array(instrs, dtype=np.int64).reshape(-1, 4))


def digits_of_index(index: int, ndigits: int, p: int) -> np.ndarray:
    out = np.zeros(ndigits, dtype=np.int64)
    for pos in range(ndigits - 1, -1, -1):
        index, out[pos] = divmod(index, p)
    return out


def eval_batch(prog: Program, digits) -> np.ndarray:
    """First failing equation per candidate (``-1`` when all hold)."""
    digits = np.ascontiguousarray(np.asarray(digits, dtype=np.int64).reshape(-1, prog.ndigits))
    return np.asarray(_impl.eval_batch(prog, digits))


def scan_lex(prog: Program, start: int, stop: int) -> np.ndarray:
    """Lexicographic indices in ``[start, stop)`` whose candidate satisfies every equation."""
    return np.asarray(_impl.scan_lex(prog, start, stop), dtype=np.int64)


def scan_random(prog: Program, count: int, seed: int) -> np.ndarray:
    """Digit rows of the passing candidates among ``count`` uniform random ones."""
    return np.asarray(_impl.scan_random(prog, count, seed), dtype=np.int64).reshape(-1, prog.ndigits)
