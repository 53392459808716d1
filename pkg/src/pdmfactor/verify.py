"""Composite checks tying the factorization pipeline to the eigensolver.

Isospectrality is verified spectrally: both the shifted original potential
and its deformed partner are solved numerically and compared level by level.
The lambda scan brackets the singularity window of the beta = 0 deformation,
and the intertwining check applies the second-order composite operator
literally on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DegenerateStateError, DomainError
from .factor import (
    FactorizationResult,
    bernoulli_f,
    factorize,
    ladder_pair,
    normalize_state,
    paper_ex1_lambda,
)
from .grids import SampledFunction, derivative
from .models import PdmModel, model_constant_mass_ho
from .spectra import solve_spectrum

__all__ = [
    "IsospectralityReport",
    "ScanReport",
    "check_isospectral",
    "scan_lambda",
    "intertwining_residual",
    "riccati_residual",
    "constant_mass_limit_check",
]

_CONVENTIONS = ("normalized", "paper-ex1", "paper_ex1")


@dataclass
class IsospectralityReport:
    """Level-by-level comparison of the original (shifted) and deformed spectra."""

    levels_checked: int
    pairs: list[tuple[float, float, float]]  # (E_original + beta, E_deformed, |gap|)
    max_gap: float
    node_match: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_gap <= self.tolerance and self.node_match

    def to_json_dict(self) -> dict:
        return {
            "levels_checked": self.levels_checked,
            "pairs": [[float(a), float(b), float(g)] for a, b, g in self.pairs],
            "max_gap": float(self.max_gap),
            "node_match": bool(self.node_match),
            "tolerance": float(self.tolerance),
            "passed": bool(self.passed),
        }


@dataclass
class ScanReport:
    """Singularity flags over a lambda sweep, with refined window boundaries."""

    lambda_values: list[float]
    singular_flags: list[bool]
    critical_lambda: Optional[float]
    boundaries: list[float] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "lambda_values": [float(v) for v in self.lambda_values],
            "singular_flags": [bool(b) for b in self.singular_flags],
            "critical_lambda": None
            if self.critical_lambda is None
            else float(self.critical_lambda),
            "boundaries": [float(b) for b in self.boundaries],
        }


def check_isospectral(model: PdmModel, n: int, fac: FactorizationResult,
                      k_levels: int, tol: float) -> IsospectralityReport:
    """Solve (m, V_n-) and (m, V~_n-) and compare E_k + beta with E~_k.

    A gap above tol produces a failed report, not an exception; a singular
    deformation violates the precondition and raises.
    """
    if fac.f_n.is_singular:
        raise DomainError("deformation function is singular; isospectrality is undefined")
    beta = fac.spectrum_shift
    original = solve_spectrum(model, fac.V_n_minus, k_levels)
    deformed = solve_spectrum(model, fac.V_tilde_minus, k_levels)
    pairs = []
    for j in range(k_levels):
        a = float(original.eigenvalues[j] + beta)
        b = float(deformed.eigenvalues[j])
        pairs.append((a, b, abs(a - b)))
    max_gap = max(g for _, _, g in pairs)
    node_match = original.node_counts == deformed.node_counts
    return IsospectralityReport(
        levels_checked=k_levels,
        pairs=pairs,
        max_gap=max_gap,
        node_match=node_match,
        tolerance=tol,
    )


def _normalize_convention(convention: str) -> str:
    if convention not in _CONVENTIONS:
        raise ConfigurationError(f"unknown lambda convention {convention!r}")
    return "paper-ex1" if convention.startswith("paper") else "normalized"


def scan_lambda(model: PdmModel, n: int, lambdas, convention: str = "normalized",
                grid=None, refine_tol: float = 1e-4) -> ScanReport:
    """Run the beta = 0 deformation over a lambda sweep and flag singularity.

    Each flag transition between adjacent sampled values is refined by
    bisection to refine_tol.  critical_lambda reports the largest refined
    boundary (the singular-to-nonsingular edge when scanning upward).
    Iterations are independent; they can be distributed freely as long as
    results are merged in lambda order.
    """
    convention = _normalize_convention(convention)
    lambdas = [float(v) for v in lambdas]
    if len(lambdas) == 0:
        raise ConfigurationError("empty lambda range")
    g = grid or model.recommended_grid
    psi_n = normalize_state(model.eigenstate_samples(n, g))

    def singular_at(lam: float) -> bool:
        lam_eff = paper_ex1_lambda(lam) if convention == "paper-ex1" else lam
        return bernoulli_f(psi_n, model, lam_eff).is_singular

    flags = [singular_at(v) for v in lambdas]
    boundaries = []
    for i in range(len(lambdas) - 1):
        if flags[i] == flags[i + 1]:
            continue
        lo, hi = lambdas[i], lambdas[i + 1]
        flag_lo = flags[i]
        while hi - lo > refine_tol:
            mid = 0.5 * (lo + hi)
            if singular_at(mid) == flag_lo:
                lo = mid
            else:
                hi = mid
        boundaries.append(0.5 * (lo + hi))
    critical = boundaries[-1] if boundaries else None
    return ScanReport(
        lambda_values=lambdas,
        singular_flags=flags,
        critical_lambda=critical,
        boundaries=boundaries,
    )


def _pdmse_apply(model: PdmModel, v: SampledFunction, psi: SampledFunction) -> np.ndarray:
    x = psi.x
    m = model.mass(x)
    mp = model.mass_d1(x)
    d1 = derivative(psi)
    d2 = derivative(d1)
    return -(1.0 / m) * d2.values + (mp / m**2) * d1.values + v.values * psi.values


def intertwining_residual(model: PdmModel, n: int, fac: FactorizationResult,
                          psi_k: SampledFunction, e_k: float) -> float:
    """Relative residual of the intertwining relation on one bound state.

    e_k is the eigenvalue of psi_k under the shifted Hamiltonian (m, V_n-),
    i.e. the base energy minus E_n.  Computes K = A~_n- A_n+ psi_k by literal
    operator composition and returns |H~ K - (e_k + beta) K|_inf / |K|_inf
    over the nodes where the stencils are clean (away from the pole bands
    and the grid edges).
    """
    K = ladder_pair(psi_k, fac.W_n, fac.f_n, model, "A_plus", "Atilde_minus")
    amax = float(np.max(np.abs(K.values[~K.singular_mask])))
    if amax < 1e-12 * float(np.max(np.abs(psi_k.values))):
        raise DegenerateStateError("composite state is numerically zero (k = n?)")
    hk = _pdmse_apply(model, fac.V_tilde_minus, K)
    res = np.abs(hk - (e_k + fac.spectrum_shift) * K.values)
    ok = np.ones(K.grid.n_points, dtype=bool)
    ok[:8] = False
    ok[-8:] = False
    reach = fac.W_n.guard + 6
    for pos in fac.W_n.node_positions:
        i = int(round((pos - K.grid.x_min) / K.grid.h))
        ok[max(0, i - reach) : i + reach + 1] = False
    ok &= ~K.singular_mask
    ok &= np.isfinite(res)
    return float(np.max(res[ok]) / amax)


def riccati_residual(fac: FactorizationResult) -> float:
    """Max absolute defect of the deformation constraint at usable nodes."""
    f = fac.f_n.values
    x = f.x
    model = fac.model
    m = model.mass(x)
    mp = model.mass_d1(x)
    sqm = np.sqrt(m)
    df = derivative(f)
    with np.errstate(divide="ignore", invalid="ignore"):
        w_vals = -fac.W_n.log_deriv() / sqm
        res = df.values / sqm + (2.0 * w_vals + mp / (2.0 * m * sqm)) * f.values + (
            f.values**2
        ) - fac.spectrum_shift
    ok = ~(f.singular_mask | df.singular_mask | fac.W_n.values.singular_mask)
    ok[:4] = False
    ok[-4:] = False
    ok &= np.isfinite(res)
    return float(np.max(np.abs(res[ok])))


def constant_mass_limit_check(k_levels: int = 4, tol: float = 1e-4) -> IsospectralityReport:
    """Full pipeline on the constant-mass oscillator (n = 1, lambda = 1)."""
    ho = model_constant_mass_ho()
    fac = factorize(ho, 1, beta=0.0, lam=1.0)
    return check_isospectral(ho, 1, fac, k_levels, tol)

