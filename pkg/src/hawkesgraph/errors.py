"""Exception types raised across the package."""


class HawkesError(Exception):
    """Base class for all package errors."""


class DomainError(HawkesError, ValueError):
    """An argument lies outside the domain of an operation."""


class RegimeError(HawkesError, ValueError):
    """The requested quantity does not exist in the current regime."""


class TiltError(HawkesError, ValueError):
    """A baseline tilt cannot be constructed."""


class ContractError(HawkesError, ValueError):
    """Two inputs that must agree do not."""


class UndefinedRatioError(HawkesError, ZeroDivisionError):
    """A ratio was requested with a zero denominator."""


class GraphValidationError(HawkesError, ValueError):
    """A user graph has structural issues and cannot be simulated."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues) or "invalid graph")


class TrialError(HawkesError, RuntimeError):
    """A Monte Carlo replication raised; carries the first failure."""
