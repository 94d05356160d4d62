"""Time each kernel under numba and under the numpy fallback.

    python benchmarks/bench_kernels.py            # full sizes
    python benchmarks/bench_kernels.py --quick    # smoke run

Both flavours are called directly, so the LOOCV_R2_NUMBA flag does not
matter here. JIT compilation happens in a warm-up call outside the timing.
"""

import argparse
import timeit

import numpy as np

from loocv_r2 import _accel, kernels


def cases(quick):
    rng = np.random.default_rng(0)
    big = 10_000 if quick else 1_000_000
    mid = 100 if quick else 2_000
    y = rng.normal(size=big)
    p = rng.normal(size=big)
    ym = rng.normal(size=mid)
    x = rng.normal(size=(mid, 4))
    return [
        ("compensated_sum", (y,), f"n={big}"),
        ("compensated_sum_sq_diff", (y, p), f"n={big}"),
        ("sum_sq_diff", (y, p), f"n={big}"),
        ("sum_sq_dev", (y, 0.25), f"n={big}"),
        ("loo_means", (y,), f"n={big}"),
        ("brute_loo_means", (ym,), f"n={mid}"),
        ("knn_predict", (x, ym, x[0], 5), f"m={mid}, d=4"),
        ("knn_loo", (x, ym, 5), f"n={mid}, d=4, k=5"),
    ]


def best_of(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not _accel.HAVE_NUMBA:
        print("numba is not installed; both columns time the same Python loops")
    print(f"{'kernel':<26}{'size':<20}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name, call_args, size in cases(args.quick):
        loop, vec = kernels.IMPLEMENTATIONS[name]
        loop(*call_args)  # compile
        np.testing.assert_allclose(loop(*call_args), vec(*call_args), rtol=1e-9)
        t_loop = best_of(loop, call_args, args.repeat)
        t_vec = best_of(vec, call_args, args.repeat)
        print(f"{name:<26}{size:<20}{t_loop:>12.3e}{t_vec:>12.3e}{t_vec / t_loop:>9.1f}x")


if __name__ == "__main__":
    main()
