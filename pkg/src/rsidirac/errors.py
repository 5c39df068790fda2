"""Exception hierarchy shared by all modules."""


class ConfigurationError(ValueError):
    """Invalid sizes, mismatched grids, malformed schedules or options."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateWeightError(DomainError):
    """A weight array integrates to (numerically) zero."""


class PhysicsContractError(RuntimeError):
    """A physical precondition of an experiment was violated."""


class BoundaryContaminationError(PhysicsContractError):
    """Field amplitude reached the edge of the periodic box."""


class EnergySignError(PhysicsContractError):
    """Boundary states do not share a single energy sign."""
