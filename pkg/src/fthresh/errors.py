"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class FthreshError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class ParseError(FthreshError, ValueError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class PreconditionViolated(FthreshError, ValueError):
    """An operation was called outside its domain (e.g. nu would be infinite)."""


class OrdOfZero(PreconditionViolated):
    pass


class NoRoot(FthreshError, ArithmeticError):
    pass


class BadS(PreconditionViolated):
    pass


class NotYRegular(PreconditionViolated):
    pass


class NotInUpper(PreconditionViolated):
    pass


class ResourceLimit(FthreshError, RuntimeError):
    exit_code = 3
