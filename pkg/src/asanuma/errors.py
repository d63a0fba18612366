"""Exception hierarchy shared by all modules."""


class AlgebraError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class FieldMismatch(AlgebraError, TypeError):
    pass


class NotIrreducible(AlgebraError, ValueError):
    pass


class PolySyntaxError(AlgebraError, ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based offending column."""

    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        if text:
            message = f"{message} at position {pos}: {text!r}\n{' ' * (pos + 1)}^"
        super().__init__(message)


class UnknownVariable(AlgebraError, KeyError):
    pass


class VariableMismatch(AlgebraError, ValueError):
    pass


class NotDivisible(AlgebraError, ArithmeticError):
    pass


class ExponentOverflow(AlgebraError, OverflowError):
    pass


class MissingCoordinate(AlgebraError, KeyError):
    pass


class OwnerMismatch(AlgebraError, TypeError):
    pass


class UnsupportedRelation(AlgebraError, ValueError):
    pass


class InvalidParameters(AlgebraError, ValueError):
    pass


class ZeroElement(AlgebraError, ValueError):
    pass


class UnsupportedGrading(AlgebraError, ValueError):
    pass


class UnverifiedMap(AlgebraError, ValueError):
    pass


class DegreeBoundTooLarge(AlgebraError, ValueError):
    pass


class InducedMapTrivial(AlgebraError, RuntimeError):
    pass


class VerificationFailed(AlgebraError, RuntimeError):
    pass


class FamilyUnavailable(AlgebraError, ValueError):
    pass


class ConstructionFailed(AlgebraError, RuntimeError):
    pass


class SearchSpaceTooLarge(AlgebraError, ValueError):
    pass


class TooLarge(AlgebraError, ValueError):
    pass


class NotAsanumaShape(AlgebraError, ValueError):
    pass
