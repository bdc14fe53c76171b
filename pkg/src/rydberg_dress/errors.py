"""Exception hierarchy.

Errors split into two families so the command line can map them onto exit
codes: :class:`ConfigError` (bad input, exit 2) and :class:`NumericalError`
(integration or linear-algebra failure, exit 3).
"""


class RydbergDressError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(RydbergDressError, ValueError):
    """Invalid user-supplied parameters or configuration documents."""


class NumericalError(RydbergDressError, ArithmeticError):
    """A numerical routine produced or received an unusable value."""


class NotHermitian(NumericalError):
    pass


class NegativeEigenvalue(NumericalError):
    """A supposedly positive semidefinite matrix has a large negative eigenvalue."""


class DimensionMismatch(ConfigError):
    pass


class NonPositiveWavelength(ConfigError):
    pass


class ZeroReferenceWavevector(ConfigError):
    pass


class OutOfWindow(ConfigError):
    """A time argument lies outside the gate window [0, T_g]."""


class UnknownKind(ConfigError):
    pass


class StepTooLarge(ConfigError):
    """The requested integrator step does not resolve the drive."""


class TraceDrift(NumericalError):
    """Trace of the density matrix left its tolerance band during integration."""


class NoRoot(NumericalError):
    pass


class UnknownScenario(ConfigError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""
