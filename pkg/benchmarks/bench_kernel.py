"""Compare the pure-Python and compiled Gram-search kernels.

Run as: python3 benchmarks/bench_kernel.py [--repeat N]

Each target is searched over its full row-count range with both backends;
the results must agree exactly, and the table reports best-of-N wall times.
"""

from __future__ import annotations

import argparse
import time

from blocksmith import IntMatrix
from blocksmith import _kernel
from blocksmith.gram import _row_pool

TARGETS = [
    ("det 16, l=2", [[5, 2], [2, 4]]),
    ("det 27, l=2", [[7, 1], [1, 4]]),
    ("det 16, l=3", [[5, 1, 1], [1, 2, 0], [1, 0, 2]]),
    ("det 16, l=3 chain", [[6, 1, 0], [1, 2, 1], [0, 1, 2]]),
    ("det 25, l=3", [[5, 1, 1], [1, 3, 0], [1, 0, 2]]),
    ("det 27, l=3", [[6, 0, 1], [0, 3, 1], [1, 1, 2]]),
    ("det 7, l=2 wide", [[4, 3], [3, 4]]),
]


def best_of(repeat: int, fn) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = _kernel.available_backends()
    print(f"backends available: {', '.join(backends)}")
    if "cython" not in backends:
        print("compiled kernel missing; timing the pure kernel only")

    header = f"{'target':<22} {'rows':>5} {'python':>10}"
    if "cython" in backends:
        header += f" {'cython':>10} {'speedup':>8}"
    print(header)
    for label, rows in TARGETS:
        c = IntMatrix.from_rows(rows)
        pool = _row_pool(c, signed=False)
        hi = c.trace()
        lists = c.to_lists()

        py_out = _kernel.search_rows(lists, pool, 1, hi, backend="py")
        t_py = best_of(args.repeat, lambda: _kernel.search_rows(lists, pool, 1, hi, backend="py"))
        line = f"{label:<22} {len(py_out):>5} {t_py * 1e3:>8.2f}ms"
        if "cython" in backends:
            c_out = _kernel.search_rows(lists, pool, 1, hi, backend="c")
            assert c_out == py_out, f"backend disagreement on {label}"
            t_c = best_of(args.repeat, lambda: _kernel.search_rows(lists, pool, 1, hi, backend="c"))
            line += f" {t_c * 1e3:>8.2f}ms {t_py / t_c:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
