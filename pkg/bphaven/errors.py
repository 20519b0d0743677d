"""
errors.py

Exception hierarchy shared by every bphaven subpackage.
"""


class BPHavenError(Exception):
    """Base class for all bphaven errors."""


class DomainError(BPHavenError, ValueError):
    """Distribution parameters or counts outside their support."""


class DesignError(BPHavenError, ValueError):
    """A match set cannot be mapped onto parameter slots."""


class EvaluationError(BPHavenError, ArithmeticError):
    """A log-density was evaluated at a non-finite parameter."""


class ConfigurationError(BPHavenError, ValueError):
    """Invalid configuration values."""


class InitializationError(BPHavenError, RuntimeError):
    """A chain could not start from a finite log-density."""


class SamplingError(BPHavenError, RuntimeError):
    """The target produced NaN while sampling."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state or {}

    def __reduce__(self):
        # keeps state when re-raised from a worker process
        return type(self), (str(self), self.state)


class DiagnosticError(BPHavenError, ValueError):
    """A convergence diagnostic is undefined for the given draws."""


class EstimationError(BPHavenError, RuntimeError):
    """A least-squares fit could not be computed."""


class DataError(BPHavenError, ValueError):
    """Input data could not be read or interpreted."""


class ArtifactError(BPHavenError, FileNotFoundError):
    """A required artifact is missing or an output would be overwritten."""
