"""Exception hierarchy shared across the package."""


class HMercerError(Exception):
    """Base class for all package errors."""


class ExprSyntaxError(HMercerError):
    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        msg = f"syntax error at position {position}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


class UnknownIdentifier(HMercerError):
    def __init__(self, name: str, position: int = -1):
        self.name = name
        self.position = position
        super().__init__(f"unknown identifier {name!r}")


class ArityError(HMercerError):
    def __init__(self, function: str, got: int, want: str):
        self.function = function
        self.got = got
        self.want = want
        super().__init__(f"{function}() takes {want} argument(s), got {got}")


class DomainError(HMercerError, ValueError):
    """A value fell outside the domain where a function or inequality is defined."""


class NonNegativityError(DomainError):
    def __init__(self, message: str, witness=None, value: float = float("nan")):
        self.witness = witness
        self.value = value
        super().__init__(message)


class ConfigError(HMercerError, ValueError):
    """Invalid configuration. ``field`` names the offending entry when known."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
