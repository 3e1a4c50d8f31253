"""Time the compiled kernels against the Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run on the same inputs through both modules; the outputs
are compared before timing.
"""

import argparse
import random
import timeit
from math import comb

from binpleth import _pykernels

try:
    from binpleth import _ckernels
except ImportError:
    _ckernels = None


def workloads(rng):
    vals = [comb(k, 9) for k in range(40)]
    grid = [[comb(i * j, 12) for j in range(13)] for i in range(13)]
    terms = [(i, j, rng.randrange(5)) for i in range(60) for j in range(60)]
    u = [rng.randrange(5) for _ in range(60)]
    v = [rng.randrange(5) for _ in range(60)]
    g = [1, 1, 0, 0, 0, 0, 0, 1]  # t^7 + t + 1 over F2
    a = [rng.randrange(2) for _ in range(7)]
    b = [rng.randrange(2) for _ in range(7)]
    return [
        ("forward_differences (40 values)", "forward_differences", (vals,), 2000),
        ("forward_differences_2d (13x13)", "forward_differences_2d", (grid,), 200),
        ("binom_mod_p Lucas (p=5)", "binom_mod_p", (10**12 + 7, 123456, 5), 20000),
        ("binom_row_mod_p (row 124, p=5)", "binom_row_mod_p", (97, 124, 5), 2000),
        ("bilinear_mod (3600 terms)", "bilinear_mod", (terms, u, v, 5), 500),
        ("poly_mulmod F2[t]/(t^7+t+1)", "poly_mulmod", (a, b, g, 2), 20000),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = random.Random(0)
    mods = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'kernel':36s} " + " ".join(f"{n + ' (us)':>14s}" for n, _ in mods) + ("    speedup" if len(mods) > 1 else ""))
    for label, name, inputs, number in workloads(rng):
        outs = [getattr(m, name)(*inputs) for _, m in mods]
        assert all(o == outs[0] for o in outs), f"{name}: backends disagree"
        times = []
        for _, m in mods:
            fn = getattr(m, name)
            best = min(timeit.repeat(lambda: fn(*inputs), number=number, repeat=args.repeat))
            times.append(best / number * 1e6)
        row = f"{label:36s} " + " ".join(f"{t:14.2f}" for t in times)
        if len(times) > 1:
            row += f"    {times[0] / times[1]:6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
