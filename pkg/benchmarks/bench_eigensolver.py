"""Benchmark: numba kernels vs the pure-numpy fallback on the eigensolver
hot path (Sturm bisection + inverse iteration) and the auxiliary-solution
RK4 integrator.

Both implementations live in pdmfactor.kernels regardless of which backend
the package selected at import, so this script times them head to head.
At runtime the backend is chosen by the PDMFACTOR_DISABLE_NUMBA env flag.

Usage: python benchmarks/bench_eigensolver.py [N ...]
"""

import sys
import time

import numpy as np

from pdmfactor import kernels
from pdmfactor.grids import Grid
from pdmfactor.models import model_ex1
from pdmfactor.spectra import discretize


def assemble(n_points):
    ex1 = model_ex1()
    grid = Grid(-250.0, 250.0, n_points)
    return discretize(ex1, ex1.potential_samples(grid), grid)


def time_it(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_bisection(prob, k=6):
    diag = prob.diag
    off2 = prob.off**2
    offsum = np.zeros_like(diag)
    offsum[:-1] += np.abs(prob.off)
    offsum[1:] += np.abs(prob.off)
    lo = float(np.min(diag - offsum))
    hi = float(np.max(diag + offsum))
    tol = (hi - lo) * 4e-15

    results = {}
    if kernels.NUMBA_AVAILABLE:
        kernels._bisect_lowest_scalar_jit(diag, off2, k, lo, hi, tol, 120)  # warm up
        results["numba"] = time_it(
            lambda: kernels._bisect_lowest_scalar_jit(diag, off2, k, lo, hi, tol, 120)
        )
    results["numpy"] = time_it(
        lambda: kernels._bisect_lowest_np(diag, off2, k, lo, hi, tol, 120), repeat=1
    )
    return results


def bench_inverse_iteration(prob):
    eigs = kernels.bisect_lowest(prob.diag, prob.off**2, 1, -10.0, 1e7, 1e-6)
    lam = float(eigs[0])
    results = {}
    if kernels.NUMBA_AVAILABLE:
        kernels._inverse_iteration_jit(prob.off, prob.diag, prob.off, lam, 3)  # warm up
        results["numba"] = time_it(
            lambda: kernels._inverse_iteration_jit(prob.off, prob.diag, prob.off, lam, 3)
        )
    results["numpy"] = time_it(
        lambda: kernels._inverse_iteration_impl(
            prob.off, prob.diag, prob.off, lam, 3, kernels._tridiag_solve_pivot_impl
        ),
        repeat=1,
    )
    return results


def bench_integrator(n_nodes=32001, nsub=4):
    width = 2 * nsub * (n_nodes - 1) + 1
    x = np.linspace(0.0, 12.0, width)
    c1 = 0.75 + np.exp(-x)
    c2 = -np.tanh(0.5 * x)
    hs = 12.0 / (n_nodes - 1) / nsub
    results = {}
    if kernels.NUMBA_AVAILABLE:
        out = np.empty(n_nodes)
        kernels.integrate_linear2_jit(1.0, 0.5, hs, c1, c2, nsub, n_nodes, out)
        results["numba"] = time_it(
            lambda: kernels.integrate_linear2_jit(1.0, 0.5, hs, c1, c2, nsub, n_nodes,
                                                  np.empty(n_nodes))
        )
    results["numpy"] = time_it(
        lambda: kernels._integrate_linear2_impl(1.0, 0.5, hs, c1, c2, nsub, n_nodes,
                                                np.empty(n_nodes)),
        repeat=1,
    )
    return results


def show(label, results):
    line = f"{label:40s}"
    for name in ("numba", "numpy"):
        if name in results:
            line += f"  {name}: {results[name]*1e3:9.2f} ms"
    if "numba" in results and "numpy" in results:
        line += f"  speedup: {results['numpy']/results['numba']:8.1f}x"
    print(line)


def main():
    sizes = [int(v) for v in sys.argv[1:]] or [8001, 32001]
    print(f"selected backend: {kernels.backend_name()}")
    for n in sizes:
        prob = assemble(n)
        show(f"sturm bisection, 6 levels, N={n}", bench_bisection(prob))
        show(f"inverse iteration, N={n}", bench_inverse_iteration(prob))
    show("rk4 integrator, N=32001 x 4 substeps", bench_integrator())


if __name__ == "__main__":
    main()
