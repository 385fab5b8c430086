"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`SlowLightError`.  The CLI maps the two top-level families onto exit
codes: :class:`ValidationError` -> 2, :class:`NumericError` -> 3.
"""


class SlowLightError(Exception):
    """Base class for all package errors."""


class ValidationError(SlowLightError, ValueError):
    """Invalid parameters or configuration, detected before computing."""


class ConfigError(ValidationError):
    """Scenario/config problem; carries an optional field path and line."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field '{field}'")
        if line:
            where.append(f"line {line}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class FamilyMismatchError(ValidationError):
    """Solution family incompatible with the background profile."""


class NumericError(SlowLightError, ArithmeticError):
    """A numerical procedure failed or left its domain of validity."""


class DomainError(NumericError):
    """Argument outside the supported domain."""


class PoleError(NumericError):
    """Evaluation at a pole, e.g. spectral parameter equal to the detuning."""


class NormalizationError(NumericError):
    """A state that should be normalized is not (or cannot be)."""


class DegenerateConfigurationError(NumericError):
    """Singular dressing matrix at some (tau, zeta)."""

    def __init__(self, message, tau=None, zeta=None):
        self.tau = tau
        self.zeta = zeta
        super().__init__(message)


class BlowUpError(NumericError):
    """Riccati solution runs into a pole of w."""

    def __init__(self, message, tau=None):
        self.tau = tau
        super().__init__(message)


class IterationDivergedError(NumericError):
    """Fixed-point iteration did not converge."""

    def __init__(self, message, history=()):
        self.history = list(history)
        super().__init__(message)


class InstabilityError(NumericError):
    """Finite-difference propagation became unstable."""

    def __init__(self, message, suggested_step=None):
        self.suggested_step = suggested_step
        super().__init__(message)


class ResolutionError(NumericError):
    """Grid too coarse to resolve the structure under test."""


class NoRidgeError(NumericError):
    """Field map has no dominant ridge to track."""


class AmbiguousRidgeError(NumericError):
    """Several comparable ridges; carries the candidate positions."""

    def __init__(self, message, candidates=()):
        self.candidates = list(candidates)
        super().__init__(message)


class NotStoppingScenarioError(ValidationError):
    """Stopping-distance request for a profile that does not vanish."""
