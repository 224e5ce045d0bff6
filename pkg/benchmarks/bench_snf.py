"""Time the pure-Python and compiled elimination kernels on the same inputs.

    python3 benchmarks/bench_snf.py [--sizes 4 8 16] [--count 200] [--seed 0]

Inputs that overflow int64 in the compiled kernel are counted and timed
through the dispatcher, which falls back to big ints.
"""

import argparse
import random
import time

from tgbredon import _backend, _kernels_py


def _matrices(rng, size, count, lo=-9, hi=9):
    return [[[rng.randint(lo, hi) for _ in range(size)] for _ in range(size)] for _ in range(count)]


def _time(fn, mats, size):
    start = time.perf_counter()
    for a in mats:
        fn(a, size, size)
    return time.perf_counter() - start


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 12, 16])
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    if _backend._compiled is None:
        print("compiled kernels are not built; only the pure backend is available")
    print(f"{'kernel':<16}{'size':>5}{'pure s':>10}{'compiled s':>12}{'dispatch s':>12}{'speedup':>9}{'overflow':>10}")
    for kernel in ("snf", "column_echelon"):
        pure = getattr(_kernels_py, kernel)
        dispatch = getattr(_backend, kernel)
        for size in args.sizes:
            mats = _matrices(random.Random(f"{args.seed}/{size}"), size, args.count)
            t_pure = _time(pure, mats, size)
            t_disp = _time(dispatch, mats, size)
            t_comp, overflow = float("nan"), 0
            if _backend._compiled is not None:
                fast = getattr(_backend._compiled, kernel)
                start = time.perf_counter()
                for a in mats:
                    try:
                        fast(a, size, size)
                    except OverflowError:
                        overflow += 1
                t_comp = time.perf_counter() - start
            speed = t_pure / t_disp if t_disp else float("inf")
            print(f"{kernel:<16}{size:>5}{t_pure:>10.3f}{t_comp:>12.3f}{t_disp:>12.3f}{speed:>8.1f}x{overflow:>10}")


if __name__ == "__main__":
    main()
