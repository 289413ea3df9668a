"""Exception hierarchy shared by every module of the package."""


class HeunError(Exception):
    """Base class for all errors raised by heun_appell."""


class PoleError(HeunError, ZeroDivisionError):
    """An argument hits a pole (Gamma poles, vanishing Pochhammer denominators)."""


class DomainError(HeunError, ValueError):
    """An argument lies outside the region where a representation converges."""


class NonConvergenceError(HeunError, ArithmeticError):
    """A series or quadrature did not reach its tolerance within the term cap."""


class ParameterError(HeunError, ValueError):
    """Heun parameters violate a structural constraint."""


class RegimeError(HeunError, ValueError):
    """A reduced formula was requested outside the parameter regime it holds in."""


class ExponentError(HeunError, ValueError):
    """The requested Frobenius exponent is not a root of the indicial equation."""


class ResonanceError(HeunError, ArithmeticError):
    """A zero pivot was met in a forward recurrence (logarithmic case)."""


class ProbeError(HeunError, ValueError):
    """The probe point chosen to fix the integration constant is degenerate."""


class StepUnderflowError(HeunError, ArithmeticError):
    """The ODE integrator could not make progress (step size underflow)."""
