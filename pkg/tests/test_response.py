"""Tests for dielectric and magnetic response."""

import math
import unittest

import pytest

from atomkit.config import Constants
from atomkit.errors import DomainError, PoleError
from atomkit.response import (
    Oscillator,
    OscillatorSet,
    TransitionSet,
    combination_frequencies,
    drude_epsilon,
    hydrogen_transitions,
    kk_permittivity,
    kk_poles,
    kk_susceptibility,
    langevin_chi,
    langevin_chi_for_state,
    paramagnetic_moment,
)


class TestDrude(unittest.TestCase):
    """Tests for the Drude permittivity."""

    def setUp(self):
        self.single = OscillatorSet((Oscillator(omega=1.0, f=1.0),), density=1 / (4 * math.pi))

    def test_static_and_above_resonance(self):
        """Test epsilon(0) = 2 and epsilon(2) = 2/3 for one undamped oscillator."""
        assert drude_epsilon(0.0, self.single) == pytest.approx(2.0)
        assert drude_epsilon(2.0, self.single) == pytest.approx(2 / 3)

    def test_undamped_pole(self):
        """Test PoleError at the eigenfrequency."""
        with pytest.raises(PoleError):
            drude_epsilon(1.0, self.single)

    def test_damping_absorbs(self):
        """Test a positive imaginary part with damping, finite at resonance."""
        damped = OscillatorSet((Oscillator(omega=1.0, f=1.0, gamma=0.1),))
        value = drude_epsilon(1.0, damped)
        assert value.imag > 0
        assert value.imag == pytest.approx(4 * math.pi / 0.1)

    def test_invalid(self):
        """Test negative strength and density."""
        with pytest.raises(DomainError):
            Oscillator(omega=1.0, f=-0.1)
        with pytest.raises(DomainError):
            OscillatorSet((), density=-1.0)


class TestKramersKronig(unittest.TestCase):
    """Tests for the sum-over-states susceptibility."""

    def test_lyman_alpha_strength(self):
        """Test f = 0.4162 for 1s -> 2p."""
        transitions = hydrogen_transitions(2)
        assert transitions.frequencies == (0.375,)
        assert transitions.oscillator_strengths[0] == pytest.approx(0.4162, abs=1e-4)

    def test_sum_rule_tail(self):
        """Test that the bound transitions leave the continuum share of the sum rule."""
        transitions = hydrogen_transitions(10)
        assert 0.40 < transitions.tail_estimate < 0.45

    def test_static_sign(self):
        """Test a positive static susceptibility and the printed-sign flip."""
        pairs = [(0.375, 0.55), (0.444, 0.09)]
        physical = kk_susceptibility(0.0, pairs)
        assert physical > 0
        assert kk_susceptibility(0.0, pairs, printed_sign=True) == pytest.approx(-physical)

    def test_single_term(self):
        """Test 4 n omega |x|^2 / (omega^2 - w^2) for one transition."""
        value = kk_susceptibility(0.2, [(0.5, 1.0)], density=2.0)
        assert value == pytest.approx(4 * 2.0 * 0.5 / (0.25 - 0.04))
        assert kk_permittivity(0.2, [(0.5, 1.0)], 2.0) == pytest.approx(1 + 4 * math.pi * value)

    def test_poles(self):
        """Test sorted pole positions and PoleError on a pole."""
        transitions = TransitionSet(frequencies=(0.444, 0.375), strengths=(0.1, 0.5))
        assert kk_poles(transitions) == [0.375, 0.444]
        with pytest.raises(PoleError):
            kk_susceptibility(0.375, transitions)
        with pytest.raises(PoleError):
            kk_susceptibility(-0.375, transitions)

    def test_too_few_levels(self):
        """Test n_max < 2."""
        with pytest.raises(DomainError):
            hydrogen_transitions(1)


class TestMagnetic(unittest.TestCase):
    """Tests for Langevin diamagnetism and the paramagnetic moment."""

    def setUp(self):
        self.constants = Constants(alpha=0.5)

    def test_langevin(self):
        """Test -n e^2 <r^2> / (6 mu c^2)."""
        assert langevin_chi(3.0, 1.0, self.constants) == pytest.approx(-0.125)
        with pytest.raises(DomainError):
            langevin_chi(-1.0)

    def test_langevin_for_ground_state(self):
        """Test <r^2> = 3 for 1s."""
        value = langevin_chi_for_state(1, 0, 1.0, self.constants)
        assert value == pytest.approx(-0.125, rel=1e-12)

    def test_paramagnetic_moment(self):
        """Test e m / (2 mu c), negative for m > 0."""
        assert paramagnetic_moment(1, self.constants) == pytest.approx(-0.25)
        assert paramagnetic_moment(0, self.constants) == 0.0
        with pytest.raises(DomainError):
            paramagnetic_moment(0.5)


class TestCombinationFrequencies(unittest.TestCase):
    """Tests for Raman combination lines."""

    def test_pairs(self):
        """Test every pair j > j' with its Stokes and anti-Stokes partners."""
        lines = combination_frequencies([0.0, 1.0, 3.0], 0.5)
        observed = [(line.upper, line.lower, line.omega) for line in lines]
        assert observed == [(1, 0, 1.0), (2, 0, 3.0), (2, 1, 2.0)]
        assert lines[0].stokes == 0.5
        assert lines[0].anti_stokes == 1.5
