"""Exception hierarchy.

Numerical failures derive from :class:`SimulationError` (CLI exit code 2);
configuration and precondition failures derive from :class:`ConfigError`
(CLI exit code 1).
"""


class SimulationError(Exception):
    """Base class for numerical failures."""


class SingularDenominator(SimulationError, ZeroDivisionError):
    """A closed-form susceptibility hit an exact pole."""


class SingularSystem(SimulationError):
    """The steady-state linear system is rank deficient."""


class StepTooLarge(SimulationError, ValueError):
    pass


class ArgumentTooLarge(SimulationError, ValueError):
    """Bessel argument outside the validated range."""


class TransmissionOverflow(SimulationError, OverflowError):
    """Gain large enough to overflow double precision."""


class QuadratureNonConvergent(SimulationError):
    pass


class TooManySingularCells(SimulationError):
    def __init__(self, count: int, total: int):
        self.count = count
        self.total = total
        super().__init__(
            f"{count} of {total} grid cells are singular "
            f"({100.0 * count / total:.2f}% > 1%)"
        )


class ConfigError(Exception):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(ConfigError, ValueError):
    """A parameter violates a documented invariant."""


class WindingMismatch(ValidationError):
    pass
