"""Error handling for atomkit computations."""

import logging
from enum import Enum
from typing import Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)


class ErrorSeverity(Enum):
    """Severity levels for errors."""
    WARNING = "warning"  # Result still usable, tolerance barely met
    ERROR = "error"  # The requested quantity could not be computed
    CRITICAL = "critical"  # Nothing can run (bad configuration)


class ErrorCategory(Enum):
    """Categories of errors for better handling."""
    DOMAIN = "domain"  # Invalid quantum numbers or parameters
    FORBIDDEN_TRANSITION = "forbidden_transition"  # Selection rule violated
    SINGULARITY = "singularity"  # Forward singularity, r=0, collision orbit
    CONVERGENCE = "convergence"  # Solver, quadrature or root search failed
    CONSTRAINT = "constraint"  # Field constraints violated
    POLE = "pole"  # Exact resonance hit
    CONFIGURATION = "configuration"  # Bad environment or flag values
    INTERNAL = "internal"  # Self-consistency check of a closed form failed


class AtomkitError(Exception):
    """Base exception for atomkit errors."""

    def __init__(
        self,
        message: str,
        category: ErrorCategory = ErrorCategory.DOMAIN,
        severity: ErrorSeverity = ErrorSeverity.ERROR,
        suggestion: Optional[str] = None
    ):
        """Initialize an atomkit error.

        Args:
            message: Human-readable error message
            category: Category of the error
            severity: How critical the error is
            suggestion: Suggestion for fixing the input
        """
        super().__init__(message)
        self.message = message
        self.category = category
        self.severity = severity
        self.suggestion = suggestion

    def __str__(self) -> str:
        parts = [self.message]
        if self.suggestion:
            parts.append(f"Suggestion: {self.suggestion}")
        return " | ".join(parts)

    def to_user_message(self) -> str:
        """Get a user-facing message prefixed with the error type name."""
        msg = f"{type(self).__name__}: {self.message}"
        if self.suggestion:
            msg += f"\n  -> {self.suggestion}"
        return msg


class DomainError(AtomkitError):
    """Quantum numbers or parameters outside the allowed domain."""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(
            message=message,
            category=ErrorCategory.DOMAIN,
            suggestion=suggestion
        )


class SupercriticalCouplingError(DomainError):
    """Coupling so strong that the indicial root becomes complex."""

    def __init__(self, l: int, alpha: float):
        super().__init__(
            f"supercritical coupling: (l+1)^2 = {(l + 1) ** 2} <= alpha^2 = {alpha ** 2:.6g}",
            suggestion="Use a smaller alpha or a larger l."
        )
        self.l = l
        self.alpha = alpha


class EmptySubspaceError(DomainError):
    """Requested coupled subspace is the zero space."""

    def __init__(self, l: int):
        super().__init__(
            f"the space E_-({l}) = 0: no j = l - 1/2 states for l = {l}",
            suggestion="Request the j = l + 1/2 branch."
        )
        self.l = l


class ForbiddenTransitionError(AtomkitError):
    """Transition violating the dipole selection rules."""

    def __init__(self, message: str):
        super().__init__(
            message=f"forbidden transition: {message}",
            category=ErrorCategory.FORBIDDEN_TRANSITION,
            suggestion="Allowed: J' = J +/- 1 and M' in {M, M +/- 1}."
        )


class SingularityError(AtomkitError):
    """Evaluation at a singular point of a formula or orbit."""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(
            message=message,
            category=ErrorCategory.SINGULARITY,
            suggestion=suggestion
        )


class ConvergenceError(AtomkitError):
    """Numerical solver, quadrature or root search did not converge."""

    def __init__(self, message: str, trace: Optional[Sequence[float]] = None):
        super().__init__(
            message=message,
            category=ErrorCategory.CONVERGENCE,
            suggestion="Refine the grid or raise the node count."
        )
        self.trace: List[float] = list(trace or [])

    def __str__(self) -> str:
        text = super().__str__()
        if self.trace:
            text += " | trace: " + ", ".join(f"{x:.3e}" for x in self.trace)
        return text


class ConstraintError(AtomkitError):
    """Initial data violate the divergence constraints."""

    def __init__(self, message: str, residuals: Optional[Dict[str, float]] = None):
        super().__init__(
            message=message,
            category=ErrorCategory.CONSTRAINT,
            suggestion="Project the initial fields onto the constraint surface."
        )
        self.residuals = dict(residuals or {})


class PoleError(AtomkitError):
    """Evaluation exactly on an undamped resonance."""

    def __init__(self, omega: float, pole: float):
        super().__init__(
            message=f"resonance hit: omega = {omega:.12g} at pole {pole:.12g}",
            category=ErrorCategory.POLE,
            suggestion="Shift the frequency or add damping."
        )
        self.omega = omega
        self.pole = pole


class InternalConsistencyError(AtomkitError):
    """A closed-form result failed its own consistency check."""

    def __init__(self, message: str, residual: float):
        super().__init__(
            message=f"{message} (residual {residual:.3e})",
            category=ErrorCategory.INTERNAL
        )
        self.residual = residual


class ConfigurationError(AtomkitError):
    """Invalid configuration values."""

    def __init__(self, message: str, key: Optional[str] = None):
        suggestion = None
        if key:
            suggestion = f"Check the value of {key} in the environment or .env file."
        super().__init__(
            message=message,
            category=ErrorCategory.CONFIGURATION,
            severity=ErrorSeverity.CRITICAL,
            suggestion=suggestion
        )
        self.key = key


class ErrorHandler:
    """Centralized error handler for the command-line front end."""

    def __init__(self, verbose: bool = False):
        """Initialize the error handler.

        Args:
            verbose: Whether to log the suggestion attached to each error
        """
        self.verbose = verbose
        self.error_log: list = []

    def handle(self, error: Exception) -> int:
        """Log an error and return the process exit code for it.

        Args:
            error: The exception raised by a computation

        Returns:
            Exit code (1 for computation and domain errors)
        """
        if isinstance(error, AtomkitError):
            category = error.category
            message = error.to_user_message() if self.verbose else \
                f"{type(error).__name__}: {error.message}"
        else:
            category = ErrorCategory.INTERNAL
            message = f"{type(error).__name__}: {error}"

        self.error_log.append({
            "type": type(error).__name__,
            "category": category.value,
            "message": str(error),
        })
        logger.error(message)
        return 1

    def clear_log(self):
        """Clear the error log."""
        self.error_log = []

    def get_error_summary(self) -> dict:
        """Get a summary of logged errors.

        Returns:
            Dictionary with error counts by category
        """
        summary = {}
        for error in self.error_log:
            category = error["category"]
            summary[category] = summary.get(category, 0) + 1
        return summary
