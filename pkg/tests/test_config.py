"""Tests for physical constants and settings resolution."""

import math
import unittest
from unittest.mock import patch

import pytest

from atomkit.config import (
    ALPHA_ENV_VAR,
    DEFAULT_ALPHA,
    LOG_LEVEL_ENV_VAR,
    Constants,
    Settings,
    load_settings,
    parse_alpha,
)
from atomkit.errors import ConfigurationError


class TestConstants(unittest.TestCase):
    """Tests for the Constants dataclass."""

    def test_default_alpha(self):
        """Test the default fine-structure constant."""
        assert Constants().alpha == DEFAULT_ALPHA

    def test_speed_of_light(self):
        """Test c = 1/alpha."""
        assert Constants(alpha=0.01).c == pytest.approx(100.0)

    def test_rest_energy(self):
        """Test mu c^2 in Hartree."""
        assert Constants(alpha=0.1).rest_energy == pytest.approx(100.0)

    def test_classical_radius_is_alpha_squared(self):
        """Test r_e = alpha^2 in Bohr radii."""
        constants = Constants()
        assert constants.classical_radius == pytest.approx(constants.alpha ** 2, rel=1e-15)

    def test_larmor_sign(self):
        """Test that omega_L = e B / (2 mu c) is negative for B > 0."""
        constants = Constants(alpha=0.5)
        assert constants.larmor_frequency(1.0) == pytest.approx(-0.25)

    def test_with_alpha_copies(self):
        """Test with_alpha returns a new instance."""
        base = Constants()
        other = base.with_alpha(0.2)
        assert other.alpha == 0.2
        assert base.alpha == DEFAULT_ALPHA

    def test_invalid_alpha(self):
        """Test that alpha outside (0, 1) is rejected."""
        for alpha in (0.0, 1.0, -0.1, math.nan):
            with pytest.raises(ConfigurationError):
                Constants(alpha=alpha)


class TestSettings(unittest.TestCase):
    """Tests for Settings validation."""

    def test_unknown_units(self):
        """Test that an unknown unit system is rejected."""
        with pytest.raises(ConfigurationError):
            Settings(units="imperial")

    def test_unknown_log_level(self):
        """Test that an unknown log level is rejected."""
        with pytest.raises(ConfigurationError):
            Settings(log_level="LOUD")


class TestLoadSettings(unittest.TestCase):
    """Tests for load_settings precedence."""

    def test_defaults_with_empty_env(self):
        """Test defaults when the environment is empty."""
        settings = load_settings(env={})
        assert settings.constants.alpha == DEFAULT_ALPHA
        assert settings.log_level == "WARNING"
        assert settings.units == "atomic"

    def test_env_override(self):
        """Test that ATOMKIT_ALPHA overrides the default."""
        settings = load_settings(env={ALPHA_ENV_VAR: "0.01"})
        assert settings.constants.alpha == 0.01

    def test_explicit_argument_wins(self):
        """Test that the explicit alpha beats the environment."""
        settings = load_settings(env={ALPHA_ENV_VAR: "0.01"}, alpha=0.02)
        assert settings.constants.alpha == 0.02

    def test_reciprocal_form(self):
        """Test parsing alpha given as 1/x."""
        settings = load_settings(env={ALPHA_ENV_VAR: "1/137"})
        assert settings.constants.alpha == pytest.approx(1 / 137)

    def test_log_level_from_env(self):
        """Test ATOMKIT_LOG_LEVEL, case-insensitive."""
        settings = load_settings(env={LOG_LEVEL_ENV_VAR: "debug"})
        assert settings.log_level == "DEBUG"

    def test_unparsable_alpha(self):
        """Test that garbage in ATOMKIT_ALPHA raises ConfigurationError."""
        with pytest.raises(ConfigurationError) as exc_info:
            load_settings(env={ALPHA_ENV_VAR: "fine"})
        assert exc_info.value.key == ALPHA_ENV_VAR

    def test_parse_alpha_zero_denominator(self):
        """Test that 1/0 is a configuration error."""
        with pytest.raises(ConfigurationError):
            parse_alpha("1/0")

    def test_dotenv_is_loaded(self):
        """Test that load_dotenv runs when no mapping is passed."""
        with patch("atomkit.config.load_dotenv") as mock_load, \
                patch.dict("os.environ", {ALPHA_ENV_VAR: "0.05"}):
            settings = load_settings()
        mock_load.assert_called_once()
        assert settings.constants.alpha == 0.05
