"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A structural parameter is outside the supported range (grid too small,
    polynomial degree beyond the stable recurrence bound, bad flag combination)."""


class DomainError(ValueError):
    """An input value violates a mathematical precondition of the operation."""


class InconsistentInputError(ValueError):
    """Inputs are individually valid but mutually contradictory (wrong node
    count for the requested level, seed that does not solve its equation)."""


class DegenerateStateError(RuntimeError):
    """A mapped state collapsed numerically to zero where a nonzero state was
    expected."""


class NonNormalizableError(RuntimeError):
    """A constructed wavefunction grows toward the truncation boundary and has
    no finite norm."""


class SolverError(RuntimeError):
    """The eigensolver failed to converge within its iteration cap."""
