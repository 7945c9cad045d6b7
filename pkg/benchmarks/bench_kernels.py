"""Compiled vs pure-Python tridiagonal kernels.

    python3 benchmarks/bench_kernels.py [--sizes 200 800] [--repeat 3]

Prints best-of-``repeat`` wall times and the speedup per kernel and size.
"""
import argparse
import time

import numpy as np

from oscal.kernels import get_backend


def _problem(n, rng):
    d = rng.standard_normal(n)
    e = rng.standard_normal(n)
    e[-1] = 0.0
    return d, e


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n, rng):
    d, e = _problem(n, rng)
    rhs = rng.standard_normal(n)
    shift = d - 0.1
    return {
        "tql_implicit": lambda k: k.tql_implicit(d.copy(), e.copy()),
        "tql_implicit+vectors": lambda k: k.tql_implicit(d.copy(), e.copy(), np.eye(n)),
        "bisect_lowest(10)": lambda k: k.bisect_lowest(d, e, 10),
        "tridiag_solve": lambda k: k.tridiag_solve(shift, e, rhs),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 800])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    try:
        compiled = get_backend("compiled")
    except ImportError:
        compiled = None
        print("compiled extension not built; timing the Python kernels only")
    python = get_backend("python")
    rng = np.random.default_rng(0)

    print(f"{'kernel':<22} {'n':>6} {'python [s]':>12} {'compiled [s]':>13} {'speedup':>8}")
    for n in args.sizes:
        for name, fn in cases(n, rng).items():
            if name == "tql_implicit+vectors" and n > 400:
                continue
            tp = _best(lambda: fn(python), args.repeat)
            if compiled is None:
                print(f"{name:<22} {n:>6} {tp:>12.4f}")
                continue
            tc = _best(lambda: fn(compiled), args.repeat)
            print(f"{name:<22} {n:>6} {tp:>12.4f} {tc:>13.5f} {tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
