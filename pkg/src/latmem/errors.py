"""Exception types shared by all modules."""


class LatmemError(Exception):
    """Base class for solver errors."""


class ContractViolation(LatmemError):
    """Input violates a documented precondition."""


class RankDeficient(ContractViolation):
    pass


class Singular(ContractViolation):
    pass


class NotPositiveDefinite(ContractViolation):
    pass


class NegativeRadicand(ContractViolation):
    pass


class DependentNormals(ContractViolation):
    pass


class DependentInput(ContractViolation):
    pass


class TargetOutsideSpan(ContractViolation):
    pass


class DimensionTooLarge(ContractViolation):
    pass


class Degenerate(ContractViolation):
    """Polytope is not full-dimensional (volume floor undercut)."""


class NoIntegerPointInSubspace(LatmemError):
    pass


class ZeroSubgradientOutside(LatmemError):
    pass


class DepthExceeded(LatmemError):
    pass


class BudgetExceeded(LatmemError):
    """Brute-force enumeration cannot be certified within the budget."""
