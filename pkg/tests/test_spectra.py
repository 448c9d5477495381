"""Tests for hydrogen levels, series, Zeeman lines and the Dirac spectrum."""

import math
import unittest
from unittest.mock import patch

import numpy as np
import pytest

from atomkit import spectra
from atomkit.angular import HalfInt
from atomkit.config import Constants
from atomkit.errors import (
    DomainError,
    ForbiddenTransitionError,
    SupercriticalCouplingError,
)
from atomkit.spectra import (
    SERIES_NAMES,
    Level,
    LineKind,
    ZeemanMode,
    anomalous_zeeman_lines,
    bohr_sommerfeld_action,
    bohr_sommerfeld_level,
    degeneracy,
    dirac_level,
    dirac_level_approx,
    dirac_level_spectroscopic,
    dirac_radial_series,
    normal_zeeman_triplet,
    radial_expectation,
    radial_wavefunction,
    ritz_combination,
    schrodinger_level,
    selection_allowed,
    series_limit,
    series_lines,
    transition_frequency,
    zeeman_levels,
)

ALPHA = 1 / 137.035999


class TestSchrodingerLevels(unittest.TestCase):
    """Tests for the nonrelativistic spectrum."""

    def test_ground_state(self):
        """Test E_1 = -1/2 Hartree."""
        assert schrodinger_level(1) == -0.5

    def test_degeneracy(self):
        """Test n^2 states per level."""
        assert [degeneracy(n) for n in range(1, 6)] == [1, 4, 9, 16, 25]

    def test_invalid_n(self):
        """Test that n = 0 and non-integers are rejected."""
        for n in (0, -1, 1.5):
            with pytest.raises(DomainError):
                schrodinger_level(n)

    def test_level_defaults_energy(self):
        """Test that Level fills in the Schrodinger energy."""
        level = Level(3, 2, -1)
        assert level.energy == pytest.approx(-1 / 18)
        assert level.label == "(3,2,-1)"

    def test_level_validation(self):
        """Test l >= n, |m| > l and non-negative energy."""
        with pytest.raises(DomainError):
            Level(2, 2)
        with pytest.raises(DomainError):
            Level(2, 1, 2)
        with pytest.raises(DomainError):
            Level(1, energy=0.1)


class TestSeries(unittest.TestCase):
    """Tests for emission series and the Ritz principle."""

    def test_balmer_alpha(self):
        """Test the 3 -> 2 frequency 5/72."""
        assert transition_frequency(3, 2) == pytest.approx(5 / 72)

    def test_series_ordered_and_bounded(self):
        """Test increasing frequencies below the series limit."""
        lines = series_lines(1, [4, 2, 3])
        omegas = [line.omega for line in lines]
        assert omegas == sorted(omegas)
        assert lines[0].upper.n == 2
        assert all(w < series_limit(1) for w in omegas)
        assert series_limit(2) == pytest.approx(0.125)

    def test_series_names(self):
        """Test the named series."""
        assert SERIES_NAMES[1] == "Lyman"
        assert SERIES_NAMES[2] == "Balmer"

    def test_upper_not_above_lower(self):
        """Test that n <= m is rejected."""
        with pytest.raises(DomainError):
            series_lines(3, [3, 4])

    def test_ritz_residual(self):
        """Test omega_km = omega_kn + omega_nm."""
        assert abs(ritz_combination(1, 3, 7)) < 1e-15
        with pytest.raises(DomainError):
            ritz_combination(3, 2, 5)


class TestRadialFunctions(unittest.TestCase):
    """Tests for the closed-form radial functions."""

    def test_ground_state_form(self):
        """Test R_10 = 2 exp(-r)."""
        R = radial_wavefunction(1, 0)
        r = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(R(r), 2 * np.exp(-r), rtol=1e-14)

    def test_node_count(self):
        """Test n - l - 1 radial nodes."""
        for n in range(1, 6):
            for l in range(n):
                assert radial_wavefunction(n, l).node_count() == n - l - 1

    def test_expectations(self):
        """Test <r^0> = 1, <r> and <r^2> against closed forms."""
        for n in range(1, 5):
            for l in range(n):
                assert radial_expectation(n, l, 0) == pytest.approx(1.0, rel=1e-12)
                mean_r = (3 * n * n - l * (l + 1)) / 2
                assert radial_expectation(n, l, 1) == pytest.approx(mean_r, rel=1e-12)
        assert radial_expectation(1, 0, 2) == pytest.approx(3.0, rel=1e-12)
        assert radial_expectation(2, 1, -1) == pytest.approx(0.25, rel=1e-12)

    def test_divergent_moment(self):
        """Test that <r^-3> of an s state is rejected."""
        with pytest.raises(DomainError):
            radial_expectation(1, 0, -3)


class TestZeeman(unittest.TestCase):
    """Tests for Zeeman levels and lines."""

    def setUp(self):
        self.constants = Constants()
        self.omega_l = self.constants.larmor_frequency(1.0)

    def test_orbital_levels(self):
        """Test E_n + m omega_L."""
        value = zeeman_levels(2, 1, 1, 1.0, ZeemanMode.ORBITAL, self.constants)
        assert value == pytest.approx(-0.125 + self.omega_l)

    def test_pauli_shift(self):
        """Test the +/- omega_L spin term."""
        plus = zeeman_levels(2, 1, 0, 1.0, "pauli+", self.constants)
        minus = zeeman_levels(2, 1, 0, 1.0, "pauli-", self.constants)
        assert plus - minus == pytest.approx(2 * self.omega_l)

    def test_invalid_mode(self):
        """Test that an unknown mode is rejected."""
        with pytest.raises(DomainError):
            zeeman_levels(2, 1, 0, 1.0, "dirac", self.constants)

    def test_normal_triplet(self):
        """Test the three equally spaced lines and their kinds."""
        lines = normal_zeeman_triplet(0.375, 1.0, self.constants)
        assert [line.delta_m for line in lines] == [-1, 0, 1]
        assert lines[1].kind is LineKind.PI
        assert lines[1].omega == 0.375
        assert lines[0].omega - lines[1].omega == pytest.approx(self.omega_l)

    def test_anomalous_line(self):
        """Test omega0 - omega_L (g M - g' M') for 2P3/2 -> 2S1/2."""
        line = anomalous_zeeman_lines(
            (1, "3/2", "3/2"), (0, "1/2", "1/2"), 0.375, 1.0, self.constants
        )
        expected = 0.375 - self.omega_l * (4 / 3 * 1.5 - 2 * 0.5)
        assert line.omega == pytest.approx(expected, rel=1e-14)
        assert line.kind is LineKind.ANOMALOUS
        assert line.delta_m == 1

    def test_spinless_limit_is_normal(self):
        """Test that g = 1 on both terms reproduces the normal triplet spacing."""
        line = anomalous_zeeman_lines(
            (1, "3/2", "1/2"), (0, "1/2", "-1/2"), 0.375, 1.0, self.constants,
            g_upper=1.0, g_lower=1.0,
        )
        assert line.omega == pytest.approx(0.375 - self.omega_l)

    def test_delta_j_zero_needs_flag(self):
        """Test that Delta J = 0 needs strict_j_rule=False."""
        upper, lower = (1, "1/2", "1/2"), (0, "1/2", "-1/2")
        with pytest.raises(ForbiddenTransitionError):
            anomalous_zeeman_lines(upper, lower, 0.375, 1.0, self.constants)
        line = anomalous_zeeman_lines(
            upper, lower, 0.375, 1.0, self.constants, strict_j_rule=False
        )
        expected = 0.375 - self.omega_l * (2 / 3 * 0.5 + 2 * 0.5)
        assert line.omega == pytest.approx(expected)

    def test_delta_m_too_large(self):
        """Test that |M - M'| > 1 is forbidden."""
        with pytest.raises(ForbiddenTransitionError):
            anomalous_zeeman_lines((1, "3/2", "3/2"), (0, "1/2", "-1/2"), 0.375, 1.0)


class TestSelectionRule(unittest.TestCase):
    """Tests for selection_allowed."""

    def test_allowed_and_forbidden(self):
        """Test l' = l +/- 1 with |m' - m| <= 1."""
        assert selection_allowed(0, 0, 1, 1)
        assert selection_allowed(2, -1, 1, 0)
        assert not selection_allowed(1, 0, 1, 0)
        assert not selection_allowed(0, 0, 2, 0)
        assert not selection_allowed(1, 1, 2, -1)


class TestDirac(unittest.TestCase):
    """Tests for the Dirac levels and radial series."""

    def test_ground_state(self):
        """Test E(0, 0) = sqrt(1 - alpha^2)."""
        exact = math.sqrt(1 - ALPHA ** 2)
        assert abs(dirac_level(0, 0, ALPHA) - exact) / exact <= 1e-14

    def test_binomial_expansion(self):
        """Test |exact - approx| <= 5 alpha^4 for n_r + l <= 3."""
        for n_r in range(4):
            for l in range(4 - n_r):
                diff = abs(dirac_level(n_r, l, ALPHA) - dirac_level_approx(n_r, l, ALPHA))
                assert diff <= 5 * ALPHA ** 4

    def test_fine_structure_split(self):
        """Test that (1, 0) and (0, 1) split by about alpha^4 / 32."""
        split = dirac_level(1, 0, ALPHA) - dirac_level(0, 1, ALPHA)
        assert split != 0
        assert abs(split) == pytest.approx(ALPHA ** 4 / 32, rel=0.05)

    def test_nonrelativistic_limit(self):
        """Test that the binding energy tends to -1/(2 N^2)."""
        alpha = 1e-4
        binding = (dirac_level(2, 1, alpha) - 1.0) / alpha ** 2
        assert binding == pytest.approx(-0.5 / 16, rel=1e-5)

    def test_spectroscopic_labels(self):
        """Test 2p1/2 at N = 2 has the 2s energy (n_r = 1, l = 0)."""
        assert dirac_level_spectroscopic(2, "1/2", ALPHA) == dirac_level(1, 0, ALPHA)
        assert dirac_level_spectroscopic(2, "3/2", ALPHA) == dirac_level(0, 1, ALPHA)
        with pytest.raises(DomainError):
            dirac_level_spectroscopic(1, "3/2", ALPHA)

    def test_alpha_out_of_range(self):
        """Test that alpha = 1 is rejected by levels and series."""
        with pytest.raises(DomainError):
            dirac_level(0, 0, 1.0)
        with pytest.raises(DomainError):
            dirac_radial_series(1, 0, 1.0)

    def test_supercritical_is_domain_error(self):
        """Test that supercritical coupling is reported as a domain error."""
        assert issubclass(SupercriticalCouplingError, DomainError)

    def test_series_residuals(self):
        """Test termination and recurrence residuals below 1e-10."""
        for n_r in range(4):
            for l in range(3):
                series = dirac_radial_series(n_r, l, ALPHA)
                assert len(series.coefficients) == n_r + 1
                assert max(series.residuals.values()) <= 1e-10
                assert series.energy == dirac_level(n_r, l, ALPHA)


class TestBohrSommerfeld(unittest.TestCase):
    """Tests for the old quantum theory."""

    def test_levels(self):
        """Test that the quantized action gives -1/(2 n^2) for n <= 4."""
        for n in range(1, 5):
            for l in range(1, n + 1):
                value = bohr_sommerfeld_level(n - l, l)
                assert value == pytest.approx(-0.5 / n ** 2, rel=1e-6)

    def test_circular_orbit_from_action(self):
        """Test k = 0 finds -1/(2 l^2) by evaluating the radial action."""
        for l in (1, 2, 3, 7):
            with patch.object(spectra, "bohr_sommerfeld_action",
                              wraps=spectra.bohr_sommerfeld_action) as action:
                value = bohr_sommerfeld_level(0, l)
            assert action.call_count >= 2
            assert value == pytest.approx(-0.5 / l ** 2, rel=1e-12)

    def test_action_vanishes_on_circular_orbit(self):
        """Test J_r = 0 at |E| = 1/(2 l^2) and J_r > 0 just below it."""
        for l in (1, 3):
            edge = 0.5 / l ** 2
            assert bohr_sommerfeld_action(edge, l) == 0.0
            assert bohr_sommerfeld_action(edge * (1 - 1e-6), l) > 0.0

    def test_radial_orbit(self):
        """Test the pendulum orbit l = 0."""
        assert bohr_sommerfeld_level(2, 0) == pytest.approx(-0.125, rel=1e-6)

    def test_action_formula(self):
        """Test J_r = 2 pi (1/sqrt(2|E|) - l)."""
        binding = 0.08
        expected = 2 * math.pi * (1 / math.sqrt(2 * binding) - 1)
        assert bohr_sommerfeld_action(binding, 1) == pytest.approx(expected, rel=1e-10)

    def test_invalid(self):
        """Test k = l = 0."""
        with pytest.raises(DomainError):
            bohr_sommerfeld_level(0, 0)

    def test_level_carries_half_int(self):
        """Test that HalfInt labels feed the spectroscopic mapping."""
        assert dirac_level_spectroscopic(1, HalfInt(1), ALPHA) == dirac_level(0, 0, ALPHA)
