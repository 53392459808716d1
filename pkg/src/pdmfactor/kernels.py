"""Hot numerical kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time: numba is used when it imports
cleanly and the environment variable ``PDMFACTOR_DISABLE_NUMBA`` is unset
(or set to something falsy).  Both implementations are kept importable so
they can be compared directly (see ``benchmarks/bench_eigensolver.py``).

Kernels
-------
sturm_count            eigenvalue count below a shift, via the LDL^T pivot
                       recurrence of a symmetric tridiagonal matrix
bisect_lowest          k lowest eigenvalues by Sturm bisection
inverse_iteration      eigenvector refinement with a partially pivoted
                       tridiagonal solve
integrate_linear2      fixed-step RK4 march of u'' = c1(x) u + c2(x) u'
                       with precomputed coefficient tables
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("PDMFACTOR_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    njit = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not _DISABLE

_TINY = 1e-300


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# Sturm count and bisection
# ---------------------------------------------------------------------------

def _sturm_count_impl(diag, off2, sigma):
    """Number of eigenvalues of tridiag(diag, off) strictly below sigma.

    off2 holds the squared off-diagonal entries.  Zero pivots are nudged to
    keep the recurrence defined; this is the standard safeguarded count.
    """
    n = diag.shape[0]
    count = 0
    d = diag[0] - sigma
    if d == 0.0:
        d = _TINY
    if d < 0.0:
        count += 1
    for i in range(1, n):
        d = diag[i] - sigma - off2[i - 1] / d
        if d == 0.0:
            d = _TINY
        if d < 0.0:
            count += 1
    return count


def _bisect_lowest_scalar(diag, off2, k, lo0, hi0, tol, maxit, count_fn):
    eigs = np.empty(k)
    for j in range(k):
        lo = lo0
        hi = hi0
        for _ in range(maxit):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if count_fn(diag, off2, mid) > j:
                hi = mid
            else:
                lo = mid
        eigs[j] = 0.5 * (lo + hi)
    return eigs


def _bisect_lowest_np(diag, off2, k, lo0, hi0, tol, maxit):
    """Vectorized bisection: one Sturm sweep per round serves all k targets."""
    lo = np.full(k, lo0)
    hi = np.full(k, hi0)
    targets = np.arange(k)
    n = diag.shape[0]
    for _ in range(maxit):
        if np.max(hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        d = diag[0] - mid
        d[d == 0.0] = _TINY
        counts = (d < 0.0).astype(np.int64)
        for i in range(1, n):
            d = diag[i] - mid - off2[i - 1] / d
            d[d == 0.0] = _TINY
            counts += d < 0.0
        above = counts > targets
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Partially pivoted tridiagonal solve and inverse iteration
# ---------------------------------------------------------------------------

def _tridiag_solve_pivot_impl(sub, diag, sup, rhs, out):
    """Solve T x = rhs for tridiagonal T with partial pivoting.

    sub[i] couples row i+1 to column i; sup[i] couples row i to column i+1.
    Pivoting introduces a second superdiagonal, carried in u2.
    """
    n = diag.shape[0]
    d = np.empty(n)
    u1 = np.empty(n)
    u2 = np.empty(n)
    b = np.empty(n)
    for i in range(n):
        d[i] = diag[i]
        u1[i] = sup[i] if i < n - 1 else 0.0
        u2[i] = 0.0
        b[i] = rhs[i]
    for i in range(n - 1):
        low = sub[i]
        if abs(low) > abs(d[i]):
            # swap rows i and i+1
            t = d[i]
            d[i] = low
            low = t
            t = u1[i]
            u1[i] = d[i + 1]
            d[i + 1] = t
            t = u2[i]
            u2[i] = u1[i + 1]
            u1[i + 1] = t
            t = b[i]
            b[i] = b[i + 1]
            b[i + 1] = t
        if d[i] == 0.0:
            d[i] = _TINY
        m = low / d[i]
        d[i + 1] -= m * u1[i]
        u1[i + 1] -= m * u2[i]
        b[i + 1] -= m * b[i]
    if d[n - 1] == 0.0:
        d[n - 1] = _TINY
    out[n - 1] = b[n - 1] / d[n - 1]
    if n > 1:
        out[n - 2] = (b[n - 2] - u1[n - 2] * out[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        out[i] = (b[i] - u1[i] * out[i + 1] - u2[i] * out[i + 2]) / d[i]
    return out


def _inverse_iteration_impl(sub, diag, sup, lam, iters, solve_fn):
    """Eigenvector of tridiag(sub, diag, sup) at an isolated eigenvalue lam."""
    n = diag.shape[0]
    v = np.empty(n)
    state = np.uint64(88172645463325252)
    for i in range(n):
        # xorshift64 gives a deterministic, sign-mixed start vector
        state ^= state << np.uint64(13)
        state ^= state >> np.uint64(7)
        state ^= state << np.uint64(17)
        v[i] = (np.float64(state % np.uint64(2000003)) / 1000001.5) - 1.0
    shifted = diag - lam
    work = np.empty(n)
    for _ in range(iters):
        solve_fn(sub, shifted, sup, v, work)
        nrm = 0.0
        for i in range(n):
            nrm += work[i] * work[i]
        nrm = np.sqrt(nrm)
        for i in range(n):
            v[i] = work[i] / nrm
    return v


# ---------------------------------------------------------------------------
# RK4 march for u'' = c1(x) u + c2(x) u'
# ---------------------------------------------------------------------------

def _integrate_linear2_impl(y0, dy0, hs, c1, c2, nsub, n_nodes, out):
    """March from node 0 to node n_nodes-1 with nsub RK4 substeps per interval.

    c1 and c2 are sampled on the half-substep lattice along the marching
    direction: index 2*s is the start of substep s, 2*s + 1 its midpoint.
    """
    y = y0
    dy = dy0
    out[0] = y0
    s = 0
    for node in range(1, n_nodes):
        for _ in range(nsub):
            j0 = 2 * s
            k1y = dy
            k1d = c1[j0] * y + c2[j0] * dy
            y2 = y + 0.5 * hs * k1y
            d2 = dy + 0.5 * hs * k1d
            k2y = d2
            k2d = c1[j0 + 1] * y2 + c2[j0 + 1] * d2
            y3 = y + 0.5 * hs * k2y
            d3 = dy + 0.5 * hs * k2d
            k3y = d3
            k3d = c1[j0 + 1] * y3 + c2[j0 + 1] * d3
            y4 = y + hs * k3y
            d4 = dy + hs * k3d
            k4y = d4
            k4d = c1[j0 + 2] * y4 + c2[j0 + 2] * d4
            y = y + hs * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
            dy = dy + hs * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0
            s += 1
        out[node] = y
    return out


# ---------------------------------------------------------------------------
# Backend wiring
# ---------------------------------------------------------------------------

sturm_count_py = _sturm_count_impl
tridiag_solve_pivot_py = _tridiag_solve_pivot_impl
integrate_linear2_py = _integrate_linear2_impl

if NUMBA_AVAILABLE:
    sturm_count_jit = njit(cache=True)(_sturm_count_impl)
    tridiag_solve_pivot_jit = njit(cache=True)(_tridiag_solve_pivot_impl)
    integrate_linear2_jit = njit(cache=True)(_integrate_linear2_impl)

    @njit(cache=True)
    def _bisect_lowest_scalar_jit(diag, off2, k, lo0, hi0, tol, maxit):
        eigs = np.empty(k)
        n = diag.shape[0]
        for j in range(k):
            lo = lo0
            hi = hi0
            for _ in range(maxit):
                if hi - lo <= tol:
                    break
                mid = 0.5 * (lo + hi)
                count = 0
                d = diag[0] - mid
                if d == 0.0:
                    d = _TINY
                if d < 0.0:
                    count += 1
                for i in range(1, n):
                    d = diag[i] - mid - off2[i - 1] / d
                    if d == 0.0:
                        d = _TINY
                    if d < 0.0:
                        count += 1
                if count > j:
                    hi = mid
                else:
                    lo = mid
            eigs[j] = 0.5 * (lo + hi)
        return eigs

    @njit(cache=True)
    def _inverse_iteration_jit(sub, diag, sup, lam, iters):
        n = diag.shape[0]
        v = np.empty(n)
        state = np.uint64(88172645463325252)
        for i in range(n):
            state ^= state << np.uint64(13)
            state ^= state >> np.uint64(7)
            state ^= state << np.uint64(17)
            v[i] = (np.float64(state % np.uint64(2000003)) / 1000001.5) - 1.0
        shifted = diag - lam
        work = np.empty(n)
        for _ in range(iters):
            tridiag_solve_pivot_jit(sub, shifted, sup, v, work)
            nrm = 0.0
            for i in range(n):
                nrm += work[i] * work[i]
            nrm = np.sqrt(nrm)
            for i in range(n):
                v[i] = work[i] / nrm
        return v

else:  # pragma: no cover - exercised only without numba installed
    sturm_count_jit = None
    tridiag_solve_pivot_jit = None
    integrate_linear2_jit = None
    _bisect_lowest_scalar_jit = None
    _inverse_iteration_jit = None


def sturm_count(diag, off2, sigma):
    if USE_NUMBA:
        return sturm_count_jit(diag, off2, float(sigma))
    return _sturm_count_impl(diag, off2, float(sigma))


def bisect_lowest(diag, off2, k, lo0, hi0, tol, maxit=120):
    if USE_NUMBA:
        return _bisect_lowest_scalar_jit(
            diag, off2, int(k), float(lo0), float(hi0), float(tol), int(maxit)
        )
    return _bisect_lowest_np(diag, off2, int(k), float(lo0), float(hi0), float(tol), int(maxit))


def inverse_iteration(sub, diag, sup, lam, iters=3):
    if USE_NUMBA:
        return _inverse_iteration_jit(sub, diag, sup, float(lam), int(iters))
    return _inverse_iteration_impl(
        sub, diag, sup, float(lam), int(iters), _tridiag_solve_pivot_impl
    )


def integrate_linear2(y0, dy0, hs, c1, c2, nsub, n_nodes):
    out = np.empty(n_nodes)
    if USE_NUMBA:
        return integrate_linear2_jit(
            float(y0), float(dy0), float(hs), c1, c2, int(nsub), int(n_nodes), out
        )
    return _integrate_linear2_impl(
        float(y0), float(dy0), float(hs), c1, c2, int(nsub), int(n_nodes), out
    )
