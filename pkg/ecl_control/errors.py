"""
Exception hierarchy shared by every module.

Each error also derives from the closest builtin exception so callers may catch
either the library type or the builtin one.
"""

from typing import Optional


class EclError(Exception):
    """Base class for all errors raised by ecl_control."""


class DimensionError(EclError, ValueError):
    pass


class NotHurwitzError(EclError, ArithmeticError):
    """The matrix (or closed loop) is not Hurwitz: no unique Lyapunov solution
    and an infinite cost."""


class RiccatiError(EclError, ArithmeticError):
    pass


class PoleError(EclError, ArithmeticError):
    pass


class BracketError(EclError, ArithmeticError):
    pass


class NotInEpigraphError(EclError, ValueError):
    pass


class DegeneratePointError(EclError, ArithmeticError):
    pass


class ModelingError(EclError, ValueError):
    pass


class SolverFailure(EclError, RuntimeError):
    def __init__(self, message: str, status: Optional[str] = None):
        super().__init__(message)
        self.status = status


class PreconditionError(EclError, ValueError):
    pass


class InfeasiblePolicyError(EclError, ValueError):
    pass


class QIError(EclError, ValueError):
    pass


class SchemaError(EclError, ValueError):
    def __init__(self, path: str, message: str):
        super().__init__("{}: {}".format(path, message))
        self.path = path


class UnknownCaseError(EclError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def exit_code(err: EclError) -> int:
    """Process exit code of a command that stopped on ``err``: usage errors map to 2, the rest to 3."""
    if isinstance(err, (UnknownCaseError, SchemaError)):
        return EXIT_USAGE
    return EXIT_NUMERICAL
