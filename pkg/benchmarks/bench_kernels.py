"""Compare the compiled and numpy block-equation kernels.

Both backends run the same register program on the same candidate stream
(lexicographic, or splitmix64 for random sampling), so their hit lists must
agree exactly; the script refuses to report timings otherwise.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fusion2 import _kernels_py
from fusion2.kernels import compile_program, num_digits

try:
    from fusion2 import _kernels
except ImportError:  # extension not built
    _kernels = None

# (name, m, n, p, mode, size): lex scans cover [0, size), random draws size candidates
CASES = [
    ("lex (0,2)/F2", 0, 2, 2, "lex", 2 ** num_digits(0, 2)),
    ("lex (1,1)/F5", 1, 1, 5, "lex", 5 ** num_digits(1, 1)),
    ("lex (1,0)/F3", 1, 0, 3, "lex", 3 ** num_digits(1, 0)),
    ("random (2,2)/F2", 2, 2, 2, "random", 200_000),
    ("random (0,2)/F5", 0, 2, 5, "random", 200_000),
]


def _run(impl, prog, mode, size):
    if mode == "lex":
        return impl.scan_lex(prog, 0, size)
    return impl.scan_random(prog, size, 12345)


def _best(impl, prog, mode, size, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = _run(impl, prog, mode, size)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not available; run `pip install -e .` first")

    print(f"{'case':<18} {'candidates':>10} {'hits':>5} {'numpy s':>9} {'cython s':>9} {'speedup':>8}")
    for name, m, n, p, mode, size in CASES:
        prog = compile_program(m, n, p)
        t_py, hits_py = _best(_kernels_py, prog, mode, size, args.repeat)
        t_cy, hits_cy = _best(_kernels, prog, mode, size, args.repeat)
        if not np.array_equal(hits_py, hits_cy):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<18} {size:>10} {len(hits_cy):>5} {t_py:>9.3f} {t_cy:>9.3f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
