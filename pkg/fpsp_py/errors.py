"""Exceptions raised by fpsp_py.

Validation problems derive from ValueError, numerical failures from
ArithmeticError, so callers can catch them with the builtin types too.
"""


class FpspError(Exception):
    """Base class for all fpsp_py errors."""


class ValidationError(FpspError, ValueError):
    """Input does not satisfy an operation precondition."""


class ShapeError(ValidationError):
    """Array shapes or map geometries do not agree."""


class MissingDataError(ValidationError):
    """A required map, person or ground truth is absent."""


class ManifestError(ValidationError):
    """Dataset manifest or a file it references is invalid."""


class StrictModeViolation(ValidationError):
    """Target-person data was requested outside the common images."""


class NumericalError(FpspError, ArithmeticError):
    """A numerical routine could not produce a finite answer."""


class SingularSystemError(NumericalError):
    """Normal equations are singular. Increase lambda or reduce rank."""


class NonFiniteError(NumericalError):
    """Data or an intermediate result contains NaN or infinity."""


class ExcludedSampleError(FpspError, ValueError):
    """A metric is undefined for this sample, which must be skipped."""
