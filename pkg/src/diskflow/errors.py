"""Exception hierarchy for the toolkit."""


class DiskflowError(Exception):
    """Base class for all toolkit errors."""


class DomainError(DiskflowError):
    """A point lies outside the domain required by an operation."""


class ParameterError(DiskflowError):
    """Invalid parameter for a constructor or operation."""


class EvaluationError(DiskflowError):
    """A map evaluation failed (branch cut hit, overflow, pole)."""

    def __init__(self, message, *, overflow=False):
        super().__init__(message)
        self.overflow = overflow


class InversionError(DiskflowError):
    """Newton inversion failed to converge; carries the best residual."""

    def __init__(self, message, *, best_residual=None, best_point=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.best_point = best_point


class CompositionError(DiskflowError):
    """Sampled source/target containment failed during composition."""


class HorizonError(DiskflowError):
    """A backward time grid reaches past the backward horizon T_z."""

    def __init__(self, message, *, horizon=None):
        super().__init__(message)
        self.horizon = horizon


class CrossValidationError(DiskflowError):
    """Pullback and ODE orbit traces disagree; carries diagnostics."""

    def __init__(self, message, *, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ScenarioError(DiskflowError):
    """Scenario document failed validation."""
