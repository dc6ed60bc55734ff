"""Exception types shared across the package."""


class PolarizeError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(PolarizeError, ValueError):
    """An input broke a documented precondition (shape, finiteness, unit length)."""


class DescriptorInvalid(PolarizeError, ValueError):
    """A norm descriptor's parameters do not define a norm."""


class DependentVectorsError(ContractViolation):
    """Two vectors that must span a plane are (numerically) linearly dependent."""


class DomainError(PolarizeError, ValueError):
    """A closed-form helper was called outside the region where it is defined."""
