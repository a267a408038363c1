"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class KFormsError(Exception):
    """Base class for every error raised by the package."""


class FieldMismatch(KFormsError, TypeError):
    pass


class DivisionByZero(KFormsError, ZeroDivisionError):
    pass


class NotFound(KFormsError):
    pass


class AmbientMismatch(KFormsError, ValueError):
    pass


class SingularMatrix(KFormsError, ValueError):
    pass


class NoSolution(KFormsError):
    def __init__(self, message: str, solution_dim: int = -1):
        super().__init__(message)
        self.solution_dim = solution_dim


class NotInvariant(KFormsError, ValueError):
    pass


class CharacteristicDividesDegree(KFormsError, ValueError):
    pass


class ShapeMismatch(KFormsError, ValueError):
    pass


class ShapeError(KFormsError, ValueError):
    pass


class NotPreregular(KFormsError, ValueError):
    pass


class IndependenceViolation(KFormsError):
    def __init__(self, degree: int, witness):
        super().__init__(f"relation in degree {degree} lies in the ideal of lower-degree relations")
        self.degree = degree
        self.witness = witness


class DegreeOverflow(KFormsError):
    pass


class NotHomogeneous(KFormsError, ValueError):
    pass


class UnsupportedDimension(KFormsError, ValueError):
    pass


class BadContractionIndices(KFormsError, ValueError):
    pass


class NotBilinear(KFormsError, ValueError):
    pass


class BadRoot(KFormsError):
    def __init__(self, message: str, discriminant=None):
        super().__init__(message)
        self.discriminant = discriminant


class NotQuadratic(KFormsError, ValueError):
    pass


class BadParameters(KFormsError, ValueError):
    pass


class ParseError(KFormsError, ValueError):
    def __init__(self, message: str, position: str | None = None):
        super().__init__(f"{position}: {message}" if position else message)
        self.position = position
