"""Pure numpy implementation of the block-equation program.

Candidates are processed in batches; after every comparison the failing
rows are dropped so later equations only run on survivors.
"""
from __future__ import annotations

import numpy as np

OP_MM, OP_KRON, OP_ADD, OP_EQ = 0, 1, 2, 3
CHUNK = 1 << 15

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def splitmix64(counter: np.ndarray, seed: int) -> np.ndarray:
    """Counter-based splitmix64 outputs, identical to the compiled kernel."""
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (counter.astype(np.uint64) + np.uint64(1)) * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def _view(buf, prog, r):
    off = int(prog.reg_off[r])
    rows, cols = int(prog.reg_rows[r]), int(prog.reg_cols[r])
    return buf[:, off:off + rows * cols].reshape(-1, rows, cols)


def eval_batch(prog, digits: np.ndarray) -> np.ndarray:
    nb = digits.shape[0]
    result = np.full(nb, -1, dtype=np.int64)
    if nb == 0:
        return result
    p = prog.p
    buf = np.tile(prog.init, (nb, 1))
    buf[:, prog.gather_dst] = digits[:, prog.gather_src]
    alive = np.arange(nb)
    for op, dst, a, b in prog.instrs.tolist():
        if op == OP_EQ:
            x = buf[:, prog.reg_off[a]:prog.reg_off[a] + prog.reg_rows[a] * prog.reg_cols[a]]
            y = buf[:, prog.reg_off[b]:prog.reg_off[b] + prog.reg_rows[b] * prog.reg_cols[b]]
            bad = np.any(x != y, axis=1)
            if bad.any():
                result[alive[bad]] = dst
                keep = ~bad
                alive = alive[keep]
                buf = buf[keep]
                if alive.size == 0:
                    break
            continue
        x, y = _view(buf, prog, a), _view(buf, prog, b)
        if op == OP_MM:
            out = np.matmul(x, y) % p
        elif op == OP_KRON:
            # left factor varies fastest: blocks are x * y[i, j]
            out = np.einsum("bij,bac->biajc", y, x).reshape(x.shape[0], -1) % p
        else:
            out = (x + y) % p
        out = out.reshape(out.shape[0], -1)
        off = int(prog.reg_off[dst])
        buf[:, off:off + out.shape[1]] = out
    return result


def _digits_for_indices(idx: np.ndarray, ndigits: int, p: int) -> np.ndarray:
    out = np.empty((idx.size, ndigits), dtype=np.int64)
    rest = idx.copy()
    for pos in range(ndigits - 1, -1, -1):
        out[:, pos] = rest % p
        rest //= p
    return out


def scan_lex(prog, start: int, stop: int) -> np.ndarray:
    found = []
    for lo in range(start, stop, CHUNK):
        idx = np.arange(lo, min(stop, lo + CHUNK), dtype=np.int64)
        res = eval_batch(prog, _digits_for_indices(idx, prog.ndigits, prog.p))
        found.append(idx[res < 0])
    return np.concatenate(found) if found else np.zeros(0, dtype=np.int64)


def random_digits(lo: int, count: int, ndigits: int, p: int, seed: int) -> np.ndarray:
    counter = np.arange(lo * ndigits, (lo + count) * ndigits, dtype=np.uint64)
    return (splitmix64(counter, seed) % np.uint64(p)).astype(np.int64).reshape(count, ndigits)


def scan_random(prog, count: int, seed: int) -> np.ndarray:
    found = []
    for lo in range(0, count, CHUNK):
        k = min(CHUNK, count - lo)
        digits = random_digits(lo, k, prog.ndigits, prog.p, seed)
        res = eval_batch(prog, digits)
        found.append(digits[res < 0])
    if not found:
        return np.zeros((0, prog.ndigits), dtype=np.int64)
    return np.concatenate(found)
