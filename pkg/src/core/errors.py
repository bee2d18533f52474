"""Exception hierarchy for the toolkit.

Every error carries an ``error_code`` and an optional ``suggestion`` so the CLI
can report failures the same way the validation layer reports bad input.
"""

from typing import Optional


class ToolkitError(Exception):
    """Base class of all toolkit failures."""

    error_code = "toolkit_error"

    def __init__(self, message: str, suggestion: Optional[str] = None, **context):
        super().__init__(message)
        self.message = message
        self.suggestion = suggestion
        self.context = context

    def to_dict(self) -> dict:
        payload = {"error_code": self.error_code, "message": self.message}
        if self.suggestion:
            payload["suggestion"] = self.suggestion
        if self.context:
            payload["context"] = {k: _plain(v) for k, v in self.context.items()}
        return payload


def _plain(value):
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return repr(value)


class DomainError(ToolkitError, ValueError):
    """Input outside the domain of the vector field (non-finite state, Holling pole)."""

    error_code = "domain_error"


class ConvergenceError(ToolkitError, RuntimeError):
    """An iterative solver did not converge."""

    error_code = "convergence_error"


class KindMismatchError(ConvergenceError):
    """Newton converged, but to an equilibrium of another kind."""

    error_code = "kind_mismatch"


class NotFoundError(ToolkitError, LookupError):
    """A searched-for object does not exist in the given bracket."""

    error_code = "not_found"


class DegenerateError(ToolkitError, ArithmeticError):
    """A vanishing denominator makes a closed form undefined."""

    error_code = "degenerate"


class OscillatoryRegimeError(DegenerateError):
    """The linearised flow is not oscillatory (theta squared <= 0)."""

    error_code = "not_oscillatory"


class InsufficientDataError(ToolkitError, ValueError):
    """A time series is too short for the requested analysis."""

    error_code = "insufficient_data"


class FitError(ToolkitError, ValueError):
    """An exponential envelope fit could not be computed."""

    error_code = "fit_error"

    def __init__(self, message: str, interval_index: Optional[int] = None, **kwargs):
        super().__init__(message, interval_index=interval_index, **kwargs)
        self.interval_index = interval_index


class ConditionViolatedError(ToolkitError, ValueError):
    """A closed-form prediction was requested outside the conditions that define it."""

    error_code = "condition_violated"


class HypothesisViolatedError(ConditionViolatedError):
    """The crossing-time hypothesis (wbar below the critical curve) does not hold."""

    error_code = "hypothesis_violated"


class SignRegimeError(ToolkitError, ValueError):
    """Normal-form coefficients are outside the bistable sign regime."""

    error_code = "sign_regime"


class StiffnessError(ToolkitError, RuntimeError):
    """The adaptive integrator could not proceed (step size underflow)."""

    error_code = "stiffness"


class ConfigurationError(ToolkitError, ValueError):
    """A run configuration could not be parsed or validated."""

    error_code = "configuration_error"
