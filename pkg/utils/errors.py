"""Error types and their command line exit codes"""


class InputError(ValueError):
    """Malformed input: bad document, dimension mismatch, zero vector"""

    exit_code = 2

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location

    def __str__(self):
        message = super().__str__()
        if self.location is not None:
            return f"{message} (at {self.location})"
        return message


class WindowInvariantError(InputError):
    """The transformation maps a point outside the index window"""

    exit_code = 3

    def __init__(self, message, index):
        super().__init__(message, location=f"phi[{index}]")
        self.index = index


class PreconditionError(ValueError):
    """An operation was called outside its hypothesis"""

    exit_code = 2


class ConsistencyError(RuntimeError):
    """An internal invariant failed (bug trap)"""

    exit_code = 3


class OracleDisagreement(RuntimeError):
    """Two independent computations of the same quantity disagree"""

    exit_code = 1

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = values or {}


class ResolutionError(RuntimeError):
    """Quadrature did not converge at the requested resolution"""

    exit_code = 1
