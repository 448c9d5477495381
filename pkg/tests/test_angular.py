"""Tests for angular momentum algebra, spherical harmonics and spin coupling."""

import math
import unittest
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from atomkit.angular import (
    HalfInt,
    angular_laplacian,
    couple_l_half,
    half_int,
    ladder_coefficients,
    ladder_harmonic,
    lande_g,
    orbital_spin_operators,
    spherical_harmonic,
    spin_representation,
    spin_rotation,
    spinor_basis,
    validate_pair,
    vector_model_g,
)
from atomkit.errors import DomainError, EmptySubspaceError
from atomkit.quadrature import sphere_rule

# =============================================================================
# HalfInt
# =============================================================================

class TestHalfInt(unittest.TestCase):
    """Tests for half-integer arithmetic."""

    def test_constructors_agree(self):
        """Test that every accepted input type gives the same value."""
        expected = HalfInt(3)
        for value in ("3/2", 1.5, Fraction(3, 2), sp.Rational(3, 2), expected):
            assert HalfInt.of(value) == expected
        assert half_int(2) == HalfInt(4)

    def test_non_half_integer(self):
        """Test that 1/3 is rejected."""
        with pytest.raises(DomainError):
            HalfInt.of("1/3")
        with pytest.raises(DomainError):
            HalfInt.of(0.3)

    def test_arithmetic_and_order(self):
        """Test addition, negation and ordering."""
        a, b = half_int("1/2"), half_int(1)
        assert (a + b) == half_int("3/2")
        assert (b - a) == a
        assert -a == half_int("-1/2")
        assert a < b
        assert str(half_int("5/2")) == "5/2"
        assert half_int(2).is_integer
        assert half_int("3/2").as_rational() == sp.Rational(3, 2)

    def test_validate_pair(self):
        """Test (J, M) validation."""
        J, M = validate_pair("3/2", "-1/2")
        assert (J.twice, M.twice) == (3, -1)
        with pytest.raises(DomainError):
            validate_pair(1, "1/2")
        with pytest.raises(DomainError):
            validate_pair(1, 2)


# =============================================================================
# Representations
# =============================================================================

class TestLadder(unittest.TestCase):
    """Tests for ladder coefficients."""

    def test_top_and_bottom(self):
        """Test that H_+ kills e_J and H_- kills e_-J."""
        assert ladder_coefficients(2, 2)[0] == 0.0
        assert ladder_coefficients(2, -2)[1] == 0.0

    def test_spin_half(self):
        """Test s_plus(1/2, -1/2) = 1."""
        assert ladder_coefficients("1/2", "-1/2")[0] == pytest.approx(1.0)

    def test_formula(self):
        """Test sqrt((J - m)(J + m + 1)) for J = 3, m = 1."""
        s_plus, s_minus = ladder_coefficients(3, 1)
        assert s_plus == pytest.approx(math.sqrt(10))
        assert s_minus == pytest.approx(math.sqrt(12))


class TestSpinRepresentation(unittest.TestCase):
    """Tests for spin_representation."""

    def test_algebra_up_to_nine_halves(self):
        """Test commutators, Casimir and hermiticity for J <= 9/2."""
        for twice in range(10):
            rep = spin_representation(HalfInt(twice))
            assert rep.dim == twice + 1
            assert rep.commutator_residual() <= 1e-12
            assert rep.casimir_residual() <= 1e-12
            assert rep.hermiticity_residual() == 0.0

    def test_pauli_matrices(self):
        """Test that J = 1/2 gives sigma_k / 2 in the reversed basis."""
        rep = spin_representation("1/2")
        flip = np.array([[0, 1], [1, 0]])
        sigma = [
            np.array([[0, 1], [1, 0]]),
            np.array([[0, -1j], [1j, 0]]),
            np.array([[1, 0], [0, -1]]),
        ]
        for h, s in zip(rep.generators, sigma):
            np.testing.assert_allclose(flip @ h @ flip, s / 2, atol=1e-15)

    def test_basis_index(self):
        """Test the ascending basis ordering."""
        rep = spin_representation(1)
        assert [rep.basis_index(m) for m in (-1, 0, 1)] == [0, 1, 2]
        assert rep.h3[2, 2] == 1.0

    def test_raising_moves_up(self):
        """Test H_+ e_m proportional to e_{m+1}."""
        rep = spin_representation("3/2")
        e = np.zeros(4)
        e[rep.basis_index("-1/2")] = 1.0
        out = rep.raising @ e
        assert out[rep.basis_index("1/2")] == pytest.approx(2.0)
        assert np.count_nonzero(np.abs(out) > 1e-15) == 1

    def test_rotation_is_unitary(self):
        """Test unitarity and the 4 pi periodicity of spin 1/2."""
        u = spin_rotation("1/2", 2 * math.pi, (0, 0, 1))
        np.testing.assert_allclose(u, -np.eye(2), atol=1e-13)
        r = spin_rotation(2, 0.7, (1, 1, 0))
        np.testing.assert_allclose(r @ r.conj().T, np.eye(5), atol=1e-13)


# =============================================================================
# Spherical harmonics
# =============================================================================

class TestSphericalHarmonics(unittest.TestCase):
    """Tests for the recurrence-built harmonics."""

    def test_gram_matrix(self):
        """Test orthonormality for l <= 6 on the exact sphere rule."""
        rule = sphere_rule(12)
        theta, phi = rule.nodes
        values = np.array([
            spherical_harmonic(l, m)(theta, phi) for l in range(7) for m in range(-l, l + 1)
        ])
        gram = (values.conj() * rule.weights) @ values.T
        assert np.max(np.abs(gram - np.eye(len(values)))) <= 1e-10

    def test_known_values(self):
        """Test Y_0^0, Y_1^0 and the Condon-Shortley sign of Y_1^1."""
        assert spherical_harmonic(0, 0)(0.3, 0.2) == pytest.approx(1 / math.sqrt(4 * math.pi))
        assert spherical_harmonic(1, 0)(0.0, 0.0) == pytest.approx(math.sqrt(3 / (4 * math.pi)))
        y11 = spherical_harmonic(1, 1)(math.pi / 2, 0.0)
        assert y11 == pytest.approx(-math.sqrt(3 / (8 * math.pi)))

    def test_conjugation_symmetry(self):
        """Test Y_l^{-m} = (-1)^m conj(Y_l^m)."""
        theta, phi = 0.9, 1.7
        for l, m in ((2, 1), (3, 2), (4, 3)):
            lhs = spherical_harmonic(l, -m)(theta, phi)
            rhs = (-1) ** m * np.conj(spherical_harmonic(l, m)(theta, phi))
            assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_eigenfunction_of_laplacian(self):
        """Test Lambda Y = -l(l+1) Y by finite differences."""
        y = spherical_harmonic(3, 2)
        theta, phi = np.array([0.6, 1.2, 2.0]), np.array([0.1, 2.0, 4.0])
        np.testing.assert_allclose(
            angular_laplacian(y, theta, phi), -12 * y(theta, phi), atol=1e-5
        )

    def test_invalid_labels(self):
        """Test that |m| > l is rejected."""
        with pytest.raises(DomainError):
            spherical_harmonic(1, 2)

    def test_ladder_oracle_agrees(self):
        """Test that the symbolic ladder construction matches up to a phase."""
        theta, phi = np.array([0.4, 1.1, 2.5]), np.array([0.3, 1.9, 5.0])
        for l, m in ((1, 0), (2, 1), (3, -2)):
            ladder = ladder_harmonic(l, m)(theta, phi)
            direct = spherical_harmonic(l, m)(theta, phi)
            phase = ladder[0] / direct[0]
            assert abs(phase) == pytest.approx(1.0, rel=1e-10)
            np.testing.assert_allclose(ladder, phase * direct, atol=1e-10)


# =============================================================================
# Spin coupling
# =============================================================================

class TestSpinorHarmonics(unittest.TestCase):
    """Tests for l (x) 1/2 coupling."""

    def test_eigenvectors(self):
        """Test J^2 and J3 eigenvalues of every spinor harmonic for l <= 3."""
        for l in range(4):
            ops = orbital_spin_operators(l)
            for state in spinor_basis(l):
                v = state.vector()
                j, k = state.j.value, state.k.value
                np.testing.assert_allclose(ops.j_squared @ v, j * (j + 1) * v, atol=1e-12)
                np.testing.assert_allclose(ops.j3 @ v, k * v, atol=1e-12)

    def test_basis_is_orthonormal(self):
        """Test that the 2(2l+1) states form an orthonormal basis."""
        states = spinor_basis(2)
        assert len(states) == 10
        matrix = np.array([s.vector() for s in states])
        np.testing.assert_allclose(matrix @ matrix.conj().T, np.eye(10), atol=1e-14)

    def test_sigma_dot_l_eigenvalues(self):
        """Test sigma.L = l on j = l + 1/2 and -(l + 1) on j = l - 1/2."""
        l = 2
        ops = orbital_spin_operators(l)
        for state in spinor_basis(l):
            v = state.vector()
            expected = l if state.branch > 0 else -(l + 1)
            np.testing.assert_allclose(ops.sigma_dot_l @ v, expected * v, atol=1e-12)

    def test_s_wave_has_no_lower_branch(self):
        """Test that j = l - 1/2 at l = 0 raises EmptySubspaceError."""
        with pytest.raises(EmptySubspaceError):
            couple_l_half(0, "-1/2", "-1/2")

    def test_wrong_j(self):
        """Test that j = l + 3/2 is rejected."""
        with pytest.raises(DomainError):
            couple_l_half(1, "5/2", "1/2")

    def test_norm_and_evaluation(self):
        """Test unit norm and that the top state is pure spin up."""
        state = couple_l_half(1, "3/2", "3/2")
        assert state.norm() == pytest.approx(1.0)
        value = state(0.5, 0.2)
        assert value[1] == 0
        assert value[0] == pytest.approx(spherical_harmonic(1, 1)(0.5, 0.2))


# =============================================================================
# Lande factors
# =============================================================================

class TestLande(unittest.TestCase):
    """Tests for Lande factors."""

    def test_reference_values(self):
        """Test g(0,1/2) = 2, g(1,1/2) = 2/3, g(1,3/2) = 4/3 exactly."""
        assert lande_g(0, "1/2", exact=True) == sp.Rational(2)
        assert lande_g(1, "1/2", exact=True) == sp.Rational(2, 3)
        assert lande_g(1, "3/2", exact=True) == sp.Rational(4, 3)

    def test_vector_model_agrees(self):
        """Test vector_model_g equals lande_g for L <= 6."""
        for L in range(7):
            for twice in (2 * L - 1, 2 * L + 1):
                if twice > 0:
                    J = HalfInt(twice)
                    assert vector_model_g(L, J, exact=True) == lande_g(L, J, exact=True)

    def test_float_result(self):
        """Test the float form."""
        assert lande_g(1, "3/2") == pytest.approx(4 / 3)

    def test_invalid_j(self):
        """Test J = 0 and J not L +/- 1/2."""
        with pytest.raises(DomainError):
            lande_g(0, 0)
        with pytest.raises(DomainError):
            lande_g(2, "1/2")
