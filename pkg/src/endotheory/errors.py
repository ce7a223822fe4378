class EndotheoryError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatchError(EndotheoryError, ValueError):
    pass


class ResourceCapError(EndotheoryError):
    """An enumeration would exceed a configured cap."""


class FormulaSyntaxError(EndotheoryError, ValueError):
    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.message = message
        self.position = position
        self.line = line
        where = ''
        if line is not None:
            where = f' (line {line})'
        elif position is not None:
            where = f' (offset {position})'
        super().__init__(message + where)


class ArityConflictError(FormulaSyntaxError):
    pass


class SignatureError(EndotheoryError, ValueError):
    """A formula uses symbols its target structure does not interpret."""


class InadmissibleSubstitution(EndotheoryError, ValueError):
    pass


class UnboundVariableError(EndotheoryError, KeyError):
    pass


class UnknownGuardError(EndotheoryError, ValueError):
    pass


class NonCommutingError(EndotheoryError, ValueError):
    pass


class BudgetExceeded(ResourceCapError):
    """The reference evaluator ran out of its step budget."""
