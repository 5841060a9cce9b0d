"""Time the compiled and numpy phase_sum kernels on quadrature-sized inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one CSV row per size: n, python seconds, cython seconds, speedup,
max abs difference.
"""

import argparse
import timeit

import numpy as np

from qtransfer import _kernels_py

try:
    from qtransfer import _kernels
except ImportError:
    _kernels = None


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024, 4096])
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print("n,python_s,cython_s,speedup,max_abs_diff")
    for n in args.sizes:
        x = rng.uniform(-20, 20, n)
        y = rng.uniform(0, 30, n)
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        t_py = min(timeit.repeat(lambda: _kernels_py.phase_sum(x, y, c), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{n},{t_py:.4e},,,")
            continue
        t_cy = min(timeit.repeat(lambda: _kernels.phase_sum(x, y, c), number=1, repeat=args.repeat))
        diff = np.max(np.abs(_kernels.phase_sum(x, y, c) - _kernels_py.phase_sum(x, y, c)))
        print(f"{n},{t_py:.4e},{t_cy:.4e},{t_py / t_cy:.2f},{diff:.1e}")


if __name__ == "__main__":
    main()
