"""Compare the compiled GMP PSD kernel against the pure-Python fallback.

Run ``python benchmarks/bench_psd.py [--repeat R]``.  Inputs are random
integer Gram matrices (PSD, the full elimination runs) with entries of a
given bit size, which mimics cleared-denominator rational witnesses.
"""
import argparse
import timeit

import numpy as np

from qdisc import _psd_py

try:
    from qdisc import _psd_ext
except ImportError:  # pragma: no cover
    _psd_ext = None


def gram(rng, n, bits):
    B = [[int(x) for x in rng.integers(-(2 ** 20), 2 ** 20, n)] for _ in range(n)]
    scale = 2 ** max(bits - 40, 0)
    return [[sum(B[k][i] * B[k][j] for k in range(n)) * scale for j in range(n)] for i in range(n)]


def bench(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", default="8,16,32")
    ap.add_argument("--bits", type=int, default=120)
    a = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<10}{'n':>4}  {'python [s]':>11}  {'compiled [s]':>12}  {'speedup':>8}")
    for n in map(int, a.sizes.split(",")):
        M = gram(rng, n, a.bits)
        Z = [[0] * n for _ in range(n)]
        cases = [("psd_int", (M,)), ("psd_quad", (M, Z, 7))]
        for name, args in cases:
            tp = bench(getattr(_psd_py, name), args, a.repeat)
            if _psd_ext is None:
                print(f"{name:<10}{n:>4}  {tp:>11.4f}  {'n/a':>12}")
                continue
            assert getattr(_psd_ext, name)(*args) == getattr(_psd_py, name)(*args)
            tc = bench(getattr(_psd_ext, name), args, a.repeat)
            print(f"{name:<10}{n:>4}  {tp:>11.4f}  {tc:>12.4f}  {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
