"""atomkit - closed-form atomic physics with independent numerical cross-checks"""

__version__ = "1.0.0"

from .cli import main as cli_main
from .config import Constants, Settings, load_settings
from .errors import (
    AtomkitError,
    ErrorCategory,
    ErrorHandler,
    ErrorSeverity,
)
from .verification import CheckResult, run_checks

__all__ = [
    "cli_main",
    "__version__",
    "Constants",
    "Settings",
    "load_settings",
    "AtomkitError",
    "ErrorCategory",
    "ErrorSeverity",
    "ErrorHandler",
    "CheckResult",
    "run_checks",
]
