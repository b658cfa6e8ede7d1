class BbdError(Exception):
    """Root of every error raised by the toolkit."""


class DigraphError(BbdError, ValueError):
    """Invalid vertex, arc or half-order."""


class ParseError(DigraphError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InvalidCycleError(BbdError, ValueError):
    pass


class CapExceededError(BbdError):
    pass


class GeneratorError(BbdError, ValueError):
    pass


class UnknownConditionError(BbdError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown condition"


class ParameterError(BbdError, ValueError):
    """Missing or out-of-range command parameter."""
