"""Compare the compiled closure kernel against the pure-python reference.

Run as ``python benchmarks/bench_kernels.py``.  Samples random realizable
moment vectors for orders 1-4 and times ``kershaw_next`` under both
backends.
"""

import time

import numpy as np

from slabmoments.kernels import _ref
from slabmoments.moment_core import default_quadrature, moments_of_density

try:
    from slabmoments.kernels import _fast
except ImportError:
    _fast = None


def sample_moments(order, n, rng):
    quad = default_quadrature(order)
    U = np.empty((n, order + 1))
    for i in range(n):
        f = rng.uniform(0.05, 1.0, quad.nodes.size)
        U[i] = moments_of_density(f, quad, order)
    return U


def bench(fn, U, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(U)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(7)
    n = 200_000
    print(f"{n} moment vectors per order, best of 5 runs")
    for order in (1, 2, 3, 4):
        U = sample_moments(order, n, rng)
        t_ref = bench(_ref.kershaw_next, U)
        line = f"order {order}: python {t_ref * 1e3:8.2f} ms"
        if _fast is not None:
            t_fast = bench(_fast.kershaw_next, U)
            err = np.max(np.abs(_fast.kershaw_next(U) - _ref.kershaw_next(U)))
            line += (f"  compiled {t_fast * 1e3:8.2f} ms"
                     f"  speedup {t_ref / t_fast:5.1f}x  max diff {err:.2e}")
        else:
            line += "  (compiled backend unavailable)"
        print(line)


if __name__ == "__main__":
    main()
