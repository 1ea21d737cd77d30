"""Exception types shared across the package."""


class DivisionByZero(ZeroDivisionError):
    """Inversion of a scalar that is identically zero."""


class MixedScalarMode(TypeError):
    """Two scalars from differently specialized fields were combined."""


class BetaZero(ValueError):
    """An operation needs an inverse of beta but beta is specialized to zero."""


class EmptyExactWindow(ValueError):
    """No truncation order gives a non-empty exactness window."""


class OutsideExactWindow(LookupError):
    """A coefficient was read where the truncated data is not guaranteed complete."""


class DimensionMismatch(ValueError):
    """Particle number, spin count or weight of two operands disagree."""


class IndexOutOfRange(IndexError):
    """A particle or spin label outside its allowed range."""


class NotInvariant(ValueError):
    """A state expected to be symmetric is not fixed by the simultaneous swaps."""


class ParseError(ValueError):
    """Malformed expression text."""


class WrongSpinCount(ValueError):
    """An operation restricted to a particular number of spin colours."""


class UnknownOperator(KeyError):
    """An operator name that is not registered."""


class UnknownSuite(UnknownOperator):
    """A verification suite name that is not registered."""


class InvalidConfig(ValueError):
    """Run parameters that are out of range or incompatible with the suite."""


class UnboundedBlock(ValueError):
    """A matrix block request that does not describe a finite-dimensional space."""
