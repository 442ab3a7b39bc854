"""Exception types shared across the package.

Three fault families map onto the CLI's distinct exit codes: parse faults
(bad input files), validation faults (well-formed but inconsistent data),
and numeric faults (failed computations).
"""


class ShelterKitError(Exception):
    """Base class for all package errors."""


class ParseError(ShelterKitError):
    """A file could not be parsed. Carries file name, row and column."""

    def __init__(self, message, filename=None, row=None, column=None):
        loc = []
        if filename is not None:
            loc.append(str(filename))
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.filename = filename
        self.row = row
        self.column = column


class ValidationError(ShelterKitError):
    """Data violates a domain invariant. Carries the violation list."""

    def __init__(self, message, violations=()):
        if violations:
            message = message + ": " + "; ".join(violations)
        super().__init__(message)
        self.violations = list(violations)


class NumericError(ShelterKitError):
    """A numeric computation failed (degenerate input, no convergence)."""


class ConvergenceError(NumericError):
    """Iteration did not converge within its cap. Carries the residual."""

    def __init__(self, message, residual=None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual
