"""Exception hierarchy.

``ParameterError`` subclasses signal bad user input (CLI exit code 2);
``NumericError`` subclasses signal a numerical or physical-regime failure
(CLI exit code 3).
"""
from __future__ import annotations


class EITError(Exception):
    pass


class ParameterError(EITError, ValueError):
    pass


class ConfigError(ParameterError):
    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class UnitMismatchError(ConfigError):
    pass


class NumericError(EITError, ArithmeticError):
    pass


class PoleError(NumericError):
    pass


class SingularSystemError(NumericError):
    def __init__(self, message: str, condition_number: float):
        self.condition_number = condition_number
        super().__init__(f"{message} (condition number {condition_number:.3e})")


class FitError(NumericError):
    pass


class CalibrationError(NumericError):
    pass


class RegimeError(NumericError):
    pass


class ConvergenceError(NumericError):
    def __init__(self, message: str, trace=()):
        self.trace = list(trace)
        super().__init__(message)


class PropagationError(NumericError):
    def __init__(self, message: str, last_good=None):
        self.last_good = last_good
        super().__init__(message)


class WindowingWarning(UserWarning):
    """Field is not negligible at the periodic boundary."""
