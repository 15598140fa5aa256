"""Benchmark the compiled permanent kernel against the pure-Python fallback.

Run:  python3 benchmarks/bench_permanent.py
"""

import timeit

import numpy as np

from modeweaver._kernels import BACKEND, permanent_kernel, permanent_kernel_python


def bench(kernel, matrix, repeat=5, number=20):
    times = timeit.repeat(lambda: kernel(matrix), repeat=repeat, number=number)
    return min(times) / number


def main():
    rng = np.random.default_rng(0)
    print(f"active backend: {BACKEND}")
    print(f"{'n':>4} {'python (ms)':>14} {'compiled (ms)':>14} {'speedup':>9}")
    for n in (6, 8, 10, 12, 14, 16):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        number = max(1, 2 ** (14 - n))
        t_py = bench(permanent_kernel_python, a, number=number)
        if BACKEND == "cython":
            t_ext = bench(permanent_kernel, a, number=number)
            ratio = f"{t_py / t_ext:8.1f}x"
            t_ext_ms = f"{t_ext * 1e3:14.3f}"
        else:
            t_ext_ms, ratio = f"{'n/a':>14}", f"{'n/a':>9}"
        # sanity: both kernels must agree
        assert abs(permanent_kernel(a) - permanent_kernel_python(a)) <= 1e-9 * max(
            1.0, abs(permanent_kernel_python(a))
        )
        print(f"{n:>4} {t_py * 1e3:14.3f} {t_ext_ms} {ratio}")


if __name__ == "__main__":
    main()
