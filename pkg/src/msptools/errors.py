"""Exception hierarchy shared by every module of the package."""


class MspToolsError(Exception):
    """Base class for all errors raised by msptools."""


class BadModulus(MspToolsError, ValueError):
    pass


class ModulusMismatch(MspToolsError, ValueError):
    pass


class FieldMismatch(ModulusMismatch):
    pass


class DivisionByZero(MspToolsError, ZeroDivisionError):
    pass


class DimensionMismatch(MspToolsError, ValueError):
    pass


class UnqualifiedSet(MspToolsError):
    pass


class QualifiedSet(MspToolsError):
    pass


class TooManyPlayers(MspToolsError):
    pass


class SizeCapExceeded(MspToolsError):
    pass


class InvalidWitness(MspToolsError):
    pass


class NotStronglyMultiplicative(MspToolsError):
    pass


class FieldTooSmall(MspToolsError):
    pass


class DegenerateParameters(MspToolsError, ValueError):
    pass


class NoWitness(MspToolsError):
    pass


class UnknownName(MspToolsError, KeyError):
    pass


class EnumerationTooLarge(MspToolsError):
    pass


class MspFormatError(MspToolsError, ValueError):
    """Malformed MSP or witness text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MspSyntaxError(MspFormatError):
    pass


class NonSurjectiveLabels(MspFormatError):
    pass


class EntryOutOfRange(MspFormatError):
    pass
