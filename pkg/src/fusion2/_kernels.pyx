# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled interpreter for the block-equation register program."""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef enum:
    OP_MM = 0
    OP_KRON = 1
    OP_ADD = 2
    OP_EQ = 3


cdef inline uint64_t _splitmix(uint64_t seed, uint64_t counter) noexcept nogil:
    cdef uint64_t z = seed + (counter + 1) * <uint64_t>0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef struct Prog:
    int64_t p
    int64_t ninstr
    int64_t ngather
    const int64_t* rows
    const int64_t* cols
    const int64_t* off
    const int64_t* instrs
    const int64_t* gdst
    const int64_t* gsrc


cdef int64_t _run(Prog* g, int64_t* buf, const int64_t* digits) noexcept nogil:
    """Evaluate one candidate; return the first failing equation or -1."""
    cdef int64_t t, t2, i, j, k, a, b, dst, op, p = g.p
    cdef int64_t ar, ac, br, bc, acc
    cdef int64_t *x
    cdef int64_t *y
    cdef int64_t *z
    for t in range(g.ngather):
        buf[g.gdst[t]] = digits[g.gsrc[t]]
    for t in range(g.ninstr):
        op = g.instrs[4 * t]
        dst = g.instrs[4 * t + 1]
        a = g.instrs[4 * t + 2]
        b = g.instrs[4 * t + 3]
        x = buf + g.off[a]
        y = buf + g.off[b]
        ar = g.rows[a]
        ac = g.cols[a]
        br = g.rows[b]
        bc = g.cols[b]
        if op == OP_EQ:
            for i in range(ar * ac):
                if x[i] != y[i]:
                    return dst
            continue
        z = buf + g.off[dst]
        if op == OP_MM:
            for i in range(ar):
                for j in range(bc):
                    acc = 0
                    for k in range(ac):
                        acc += x[i * ac + k] * y[k * bc + j]
                    z[i * bc + j] = acc % p
        elif op == OP_KRON:
            # left factor varies fastest: entry (i*ar + r, j*ac + c) = y[i, j] * x[r, c]
            for i in range(br):
                for j in range(bc):
                    acc = y[i * bc + j]
                    for k in range(ar):
                        for t2 in range(ac):
                            z[(i * ar + k) * (bc * ac) + j * ac + t2] = (acc * x[k * ac + t2]) % p
        else:
            for i in range(ar * ac):
                acc = x[i] + y[i]
                z[i] = acc - p if acc >= p else acc
    return -1



cdef class _Bound:
    """Keeps the numpy arrays of a program alive while raw pointers are in use."""
    cdef Prog g
    cdef object keep
    cdef int64_t[::1] buf

    def __init__(self, prog):
        rows = np.ascontiguousarray(prog.reg_rows, dtype=np.int64)
        cols = np.ascontiguousarray(prog.reg_cols, dtype=np.int64)
        off = np.ascontiguousarray(prog.reg_off, dtype=np.int64)
        instrs = np.ascontiguousarray(prog.instrs, dtype=np.int64).ravel()
        gdst = np.ascontiguousarray(prog.gather_dst, dtype=np.int64)
        gsrc = np.ascontiguousarray(prog.gather_src, dtype=np.int64)
        self.keep = (rows, cols, off, instrs, gdst, gsrc)
        self.buf = np.array(prog.init, dtype=np.int64, copy=True)
        cdef int64_t[::1] vr = rows, vc = cols, vo = off, vi = instrs, vd = gdst, vs = gsrc
        self.g.p = prog.p
        self.g.ninstr = instrs.shape[0] // 4
        self.g.ngather = gdst.shape[0]
        self.g.rows = &vr[0] if vr.shape[0] else NULL
        self.g.cols = &vc[0] if vc.shape[0] else NULL
        self.g.off = &vo[0] if vo.shape[0] else NULL
        self.g.instrs = &vi[0] if vi.shape[0] else NULL
        self.g.gdst = &vd[0] if vd.shape[0] else NULL
        self.g.gsrc = &vs[0] if vs.shape[0] else NULL


def eval_batch(prog, digits):
    cdef _Bound bd = _Bound(prog)
    cdef int64_t[:, ::1] d = np.ascontiguousarray(digits, dtype=np.int64)
    cdef Py_ssize_t nb = d.shape[0], c
    out = np.empty(nb, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef int64_t* buf = &bd.buf[0] if bd.buf.shape[0] else NULL
    with nogil:
        for c in range(nb):
            o[c] = _run(&bd.g, buf, &d[c, 0])
    return out


def scan_lex(prog, long long start, long long stop):
    cdef _Bound bd = _Bound(prog)
    cdef int64_t nd = prog.ndigits, p = prog.p, pos, rest
    cdef int64_t idx
    digits_arr = np.zeros(max(nd, 1), dtype=np.int64)
    cdef int64_t[::1] dg = digits_arr
    cdef int64_t* buf = &bd.buf[0] if bd.buf.shape[0] else NULL
    found = []
    if stop <= start:
        return np.zeros(0, dtype=np.int64)
    # initial digits, then increment like an odometer
    rest = start
    for pos in range(nd - 1, -1, -1):
        dg[pos] = rest % p
        rest //= p
    idx = start
    while idx < stop:
        if _run(&bd.g, buf, &dg[0]) < 0:
            found.append(idx)
        idx += 1
        pos = nd - 1
        while pos >= 0:
            dg[pos] += 1
            if dg[pos] < p:
                break
            dg[pos] = 0
            pos -= 1
    return np.array(found, dtype=np.int64)


def scan_random(prog, long long count, seed):
    cdef _Bound bd = _Bound(prog)
    cdef int64_t nd = prog.ndigits, p = prog.p, pos
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef long long c
    digits_arr = np.zeros(max(nd, 1), dtype=np.int64)
    cdef int64_t[::1] dg = digits_arr
    cdef int64_t* buf = &bd.buf[0] if bd.buf.shape[0] else NULL
    found = []
    for c in range(count):
        for pos in range(nd):
            dg[pos] = <int64_t>(_splitmix(s, <uint64_t>(c * nd + pos)) % <uint64_t>p)
        if _run(&bd.g, buf, &dg[0]) < 0:
            found.append(digits_arr[:nd].copy())
    if not found:
        return np.zeros((0, nd), dtype=np.int64)
    return np.array(found, dtype=np.int64)
