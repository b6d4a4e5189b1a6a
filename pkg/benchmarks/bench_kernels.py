"""Time the numba and numpy kernels on the same rank-encoded inputs.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call per signature includes compilation; it is run once
before timing.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from ultradiam import _kernels as K
from ultradiam.diamfn import tau_from_space
from ultradiam.oracle import random_ultrametric


def cases():
    yield "triple_violation", (200,), lambda n: (random_ultrametric(n, 6, 1).matrix.ranks,)
    yield "subset_max", (14,), lambda n: (random_ultrametric(n, 6, 2).matrix.ranks,)
    yield "i2_violation", (6,), lambda n: (np.asarray(tau_from_space(random_ultrametric(n, 4, 3)).ranks),)

    def sampled(n):
        T = np.asarray(tau_from_space(random_ultrametric(n, 4, 4)).ranks)
        rng = np.random.default_rng(0)
        return (T,) + tuple(rng.integers(1, T.shape[0], 200_000) for _ in range(3))

    yield "i2_violation_sampled", (12,), sampled


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not K.NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy kernels are timed")
    print(f"{'kernel':<22} {'n':>4} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, sizes, make in cases():
        for n in sizes:
            data = tuple(np.ascontiguousarray(a, dtype=np.int64) for a in make(n))
            fn_np = getattr(K, f"{name}_numpy")
            t_np = min(timeit.repeat(lambda: fn_np(*data), number=1, repeat=args.repeat))
            if K.NUMBA_AVAILABLE:
                fn_nb = getattr(K, f"{name}_numba")
                fn_nb(*data)
                t_nb = min(timeit.repeat(lambda: fn_nb(*data), number=1, repeat=args.repeat))
                print(f"{name:<22} {n:>4} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} {t_np / t_nb:>7.1f}x")
            else:
                print(f"{name:<22} {n:>4} {t_np * 1e3:>10.2f} {'-':>10} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
