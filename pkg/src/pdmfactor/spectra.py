"""Independent bound-state solver for the mass-weighted Schrodinger operator.

The operator -(1/m) d^2/dx^2 + (m'/m^2) d/dx + V is discretized in its
algebraically identical divergence form -d/dx((1/m) d/dx) + V with the
inverse mass sampled at cell midpoints, which yields a symmetric tridiagonal
matrix (flux conserving, real spectrum) under Dirichlet truncation.

``lowest_eigenpairs`` is the plain second-order solve.  ``solve_spectrum``
additionally solves on the every-second-node subgrid and Richardson
extrapolates the eigenvalues, removing the leading h^2 error while leaving
the base discretization untouched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError, SolverError
from .grids import Grid, SampledFunction, trapezoid_norm
from .models import PdmModel

__all__ = [
    "SturmLiouvilleProblem",
    "SpectrumReport",
    "discretize",
    "lowest_eigenpairs",
    "count_nodes",
    "solve_spectrum",
]

NODE_NOISE_FLOOR = 1e-9


@dataclass
class SturmLiouvilleProblem:
    """Symmetric tridiagonal discretization with Dirichlet edges.

    diag and off describe the interior nodes 1 .. n-2; eigenvectors are
    padded with the boundary zeros on return.
    """

    grid: Grid
    inv_mass_half: np.ndarray
    potential: np.ndarray
    diag: np.ndarray
    off: np.ndarray

    def matrix_action(self, interior: np.ndarray) -> np.ndarray:
        out = self.diag * interior
        out[:-1] += self.off * interior[1:]
        out[1:] += self.off * interior[:-1]
        return out


def discretize(model: PdmModel, v: SampledFunction, grid: Grid | None = None) -> SturmLiouvilleProblem:
    """Assemble the divergence-form matrix for mass profile and potential."""
    g = grid or v.grid
    if v.grid != g:
        raise ConfigurationError("potential grid does not match the requested grid")
    if v.is_singular:
        raise DomainError("cannot discretize a singular-flagged potential")
    im = 1.0 / model.mass(g.midpoints())
    if np.any(~np.isfinite(im)) or np.any(im <= 0.0):
        raise DomainError("inverse mass must be positive and finite at all midpoints")
    h2 = g.h * g.h
    diag = (im[:-1] + im[1:]) / h2 + v.values[1:-1]
    off = -im[1:-1] / h2
    return SturmLiouvilleProblem(grid=g, inv_mass_half=im, potential=v.values.copy(),
                                 diag=diag, off=off)


@dataclass
class SpectrumReport:
    """Eigenvalues (ascending), unit-norm states, node counts, residuals."""

    eigenvalues: np.ndarray
    eigenstates: list[SampledFunction]
    node_counts: list[int]
    residuals: list[float]

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "node_counts": list(self.node_counts),
            "residuals": [float(r) for r in self.residuals],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def count_nodes(psi: SampledFunction) -> int:
    """Strict sign changes among values above the noise floor."""
    v = psi.values[~psi.singular_mask]
    amax = np.max(np.abs(v))
    if amax == 0.0:
        return 0
    big = v[np.abs(v) > NODE_NOISE_FLOOR * amax]
    if big.size < 2:
        return 0
    return int(np.sum(np.sign(big[1:]) != np.sign(big[:-1])))


def _eigenvalues_only(prob: SturmLiouvilleProblem, k: int) -> np.ndarray:
    diag = prob.diag
    off2 = prob.off * prob.off
    offsum = np.zeros_like(diag)
    offsum[:-1] += np.abs(prob.off)
    offsum[1:] += np.abs(prob.off)
    lo = float(np.min(diag - offsum))
    hi = float(np.max(diag + offsum))
    span = max(hi - lo, 1.0)
    # bisection resolves eigenvalues down to a few ulps of the matrix scale
    tol = span * 4e-15 + 1e-13
    return kernels.bisect_lowest(diag, off2, k, lo, hi, tol)


def lowest_eigenpairs(prob: SturmLiouvilleProblem, k: int,
                      residual_cap: float | None = None) -> SpectrumReport:
    """k lowest eigenpairs by Sturm bisection plus inverse iteration.

    Eigenvectors are normalized by trapezoid quadrature.  A pair whose
    operator-application residual exceeds the cap (default 1e-6 * |diag|_inf)
    triggers a SolverError.
    """
    if k < 1 or k > prob.grid.n_points // 10:
        raise ConfigurationError(
            f"requested {k} eigenpairs; must be between 1 and n_points/10"
        )
    eigs = _eigenvalues_only(prob, k)
    cap = residual_cap if residual_cap is not None else 1e-6 * float(np.max(np.abs(prob.diag)))
    states = []
    nodes = []
    residuals = []
    sub = prob.off
    for j in range(k):
        v = kernels.inverse_iteration(sub, prob.diag, sub, eigs[j], iters=3)
        res = float(np.max(np.abs(prob.matrix_action(v) - eigs[j] * v)))
        extra = 0
        while res > cap and extra < 3:
            v = kernels.inverse_iteration(sub, prob.diag, sub, eigs[j], iters=2)
            res = float(np.max(np.abs(prob.matrix_action(v) - eigs[j] * v)))
            extra += 1
        if res > cap:
            raise SolverError(
                f"inverse iteration residual {res:.3e} above cap {cap:.3e} at level {j}"
            )
        full = np.zeros(prob.grid.n_points)
        full[1:-1] = v
        full /= trapezoid_norm(full, prob.grid.h)
        big = np.abs(full) > 1e-8 * np.max(np.abs(full))
        if np.any(big) and full[np.argmax(big)] < 0.0:
            full = -full
        sf = SampledFunction(prob.grid, full)
        states.append(sf)
        nodes.append(count_nodes(sf))
        residuals.append(res)
    return SpectrumReport(
        eigenvalues=eigs, eigenstates=states, node_counts=nodes, residuals=residuals
    )


def solve_spectrum(model: PdmModel, v: SampledFunction, k: int,
                   refine: bool = True) -> SpectrumReport:
    """Solve for the k lowest levels of (m, V); optionally extrapolate.

    With refine=True the problem is also solved on the every-second-node
    subgrid (identical sampled potential values, exactly representable) and
    the eigenvalues are combined as (4 E_h - E_2h)/3.  Eigenvectors, node
    counts and residuals come from the fine solve.
    """
    fine = lowest_eigenpairs(discretize(model, v), k)
    if not refine:
        return fine
    if v.grid.n_points % 2 == 0:
        raise ConfigurationError("refinement requires an odd number of grid points")
    coarse_grid = v.grid.coarsened()
    v_coarse = SampledFunction(coarse_grid, v.values[::2], v.singular_mask[::2])
    coarse = lowest_eigenpairs(discretize(model, v_coarse), k)
    extrapolated = (4.0 * fine.eigenvalues - coarse.eigenvalues) / 3.0
    return SpectrumReport(
        eigenvalues=extrapolated,
        eigenstates=fine.eigenstates,
        node_counts=fine.node_counts,
        residuals=fine.residuals,
    )
