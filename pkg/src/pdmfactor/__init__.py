"""Nonsingular isospectral partner potentials from excited-state factorization
of position-dependent-mass Schrodinger operators, with an independent
Sturm-Liouville eigensolver for verification."""

from .errors import (
    ConfigurationError,
    DegenerateStateError,
    DomainError,
    InconsistentInputError,
    NonNormalizableError,
    SolverError,
)
from .factor import (
    DeformationFunction,
    FactorizationResult,
    Superpotential,
    apply_ladder,
    auxiliary_f,
    bernoulli_f,
    deformed_partner,
    factorize,
    map_eigenstate,
    partner_minus,
    partner_plus,
    spectrum_map,
    superpotential,
    zero_mode,
)
from .grids import Grid, SampledFunction, cumulative_integral, definite_integral, derivative
from .models import (
    Ex1Params,
    Ex2Params,
    PdmModel,
    catalog,
    model_box,
    model_constant_mass_ho,
    model_ex1,
    model_ex2,
    seed_solution_ex2,
)
from .spectra import (
    SpectrumReport,
    SturmLiouvilleProblem,
    count_nodes,
    discretize,
    lowest_eigenpairs,
    solve_spectrum,
)
from .verify import (
    IsospectralityReport,
    ScanReport,
    check_isospectral,
    constant_mass_limit_check,
    intertwining_residual,
    riccati_residual,
    scan_lambda,
)

__version__ = "0.1.0"
