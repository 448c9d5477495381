"""Physical constants and runtime settings.

All computations use atomic units: hbar = mu = |e| = 1, electron charge
e = -1 and c = 1/alpha. The fine-structure constant is the only free
parameter; it can be overridden by the ATOMKIT_ALPHA environment variable
(or a ``.env`` file) and by the ``--alpha`` command-line flag.
"""

import logging
import math
import os
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from dotenv import load_dotenv

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

# CODATA value used when nothing overrides it
DEFAULT_ALPHA = 1 / 137.035999

ALPHA_ENV_VAR = "ATOMKIT_ALPHA"
LOG_LEVEL_ENV_VAR = "ATOMKIT_LOG_LEVEL"

UNIT_SYSTEMS = ("atomic", "si", "gaussian")


@dataclass(frozen=True)
class Constants:
    """Fine-structure constant and the atomic-unit quantities derived from it."""

    alpha: float = DEFAULT_ALPHA
    e: float = -1.0
    mu: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0) or math.isnan(self.alpha):
            raise ConfigurationError(
                f"fine-structure constant must satisfy 0 < alpha < 1, got {self.alpha!r}",
                key=ALPHA_ENV_VAR
            )

    @property
    def c(self) -> float:
        """Speed of light in atomic units."""
        return 1.0 / self.alpha

    @property
    def rest_energy(self) -> float:
        """mu c^2 in Hartree."""
        return self.mu * self.c ** 2

    @property
    def classical_radius(self) -> float:
        """Classical electron radius e^2/(mu c^2) in Bohr radii."""
        return self.e ** 2 / (self.mu * self.c ** 2)

    def larmor_frequency(self, B: float) -> float:
        """Signed Larmor frequency e B / (2 mu c); negative for B > 0."""
        return self.e * B / (2.0 * self.mu * self.c)

    def with_alpha(self, alpha: float) -> "Constants":
        """Copy with a different fine-structure constant."""
        return replace(self, alpha=alpha)


@dataclass(frozen=True)
class Settings:
    """Resolved runtime settings for the library and CLI."""

    constants: Constants = field(default_factory=Constants)
    log_level: str = "WARNING"
    units: str = "atomic"

    def __post_init__(self):
        if self.units not in UNIT_SYSTEMS:
            raise ConfigurationError(
                f"unknown unit system {self.units!r}; choose from {', '.join(UNIT_SYSTEMS)}"
            )
        if logging.getLevelName(self.log_level.upper()) == f"Level {self.log_level.upper()}":
            raise ConfigurationError(f"unknown log level {self.log_level!r}", key=LOG_LEVEL_ENV_VAR)


def parse_alpha(raw: str) -> float:
    """Parse an alpha override given either as a float or as 1/x."""
    text = raw.strip()
    try:
        if text.startswith("1/"):
            return 1.0 / float(text[2:])
        return float(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigurationError(
            f"cannot parse fine-structure constant {raw!r}", key=ALPHA_ENV_VAR
        ) from e


def load_settings(
    env: Optional[Mapping[str, str]] = None,
    alpha: Optional[float] = None,
    units: str = "atomic",
    log_level: Optional[str] = None,
) -> Settings:
    """Resolve settings from arguments, the environment and ``.env``.

    Args:
        env: Mapping to read variables from (default: os.environ after load_dotenv)
        alpha: Explicit fine-structure constant; wins over the environment
        units: Output unit system
        log_level: Explicit log level name; wins over ATOMKIT_LOG_LEVEL

    Returns:
        The resolved Settings
    """
    if env is None:
        load_dotenv()
        env = os.environ

    if alpha is None and env.get(ALPHA_ENV_VAR):
        alpha = parse_alpha(env[ALPHA_ENV_VAR])
        logger.debug("alpha overridden from %s: %r", ALPHA_ENV_VAR, alpha)
    constants = Constants(alpha=DEFAULT_ALPHA if alpha is None else alpha)

    level = log_level or env.get(LOG_LEVEL_ENV_VAR) or "WARNING"
    return Settings(constants=constants, log_level=level.upper(), units=units)
