"""Tests for spectral field evolution, dipole radiation and interfaces."""

import math
import unittest

import numpy as np
import pytest

from atomkit.config import Constants
from atomkit.errors import ConstraintError, DomainError, SingularityError
from atomkit.fields import (
    DipoleSource,
    DispersionKind,
    HarmonicSource,
    Polarization,
    PrecessionKind,
    SampledSource,
    SpectralField,
    SpectralGrid,
    brewster_angle,
    centroid,
    classical_zeeman_modes,
    critical_angle,
    dipole_potentials,
    divergence_residual,
    field_energy,
    free_dispersion_evolve,
    fresnel,
    gaussian_packet,
    group_velocity,
    hertz_dipole,
    larmor_precession_rate,
    maxwell_evolve,
    maxwell_propagate,
    packet_centroid_velocity,
    plane_wave,
    radiated_power,
    retarded_potentials,
    snell_angle,
    transverse_projection,
    zeeman_oscillator_spectrum,
)
from atomkit.quadrature import sphere_rule

# =============================================================================
# Spectral grids
# =============================================================================

class TestSpectralGrid(unittest.TestCase):
    """Tests for SpectralGrid and SpectralField."""

    def test_geometry(self):
        """Test spacing, shape and the first wave number."""
        grid = SpectralGrid(dims=2, L=2 * math.pi, N=8)
        assert grid.shape == (8, 8)
        assert grid.dx == pytest.approx(math.pi / 4)
        assert grid.wave_vectors[0][1, 0] == pytest.approx(1.0)
        assert grid.axis[0] == pytest.approx(-math.pi)

    def test_invalid(self):
        """Test dims outside 1..3 and N < 2."""
        with pytest.raises(DomainError):
            SpectralGrid(dims=4, L=1.0, N=8)
        with pytest.raises(DomainError):
            SpectralGrid(dims=1, L=1.0, N=1)

    def test_parseval_and_hermitian(self):
        """Test Parseval and the symmetry of a real field's coefficients."""
        grid = SpectralGrid(dims=3, L=1.0, N=8)
        values = np.random.default_rng(3).normal(size=grid.shape)
        field_ = SpectralField.from_physical(grid, values)
        assert field_.parseval_residual() <= 1e-12
        assert field_.hermitian_residual() <= 1e-12


# =============================================================================
# Maxwell evolution
# =============================================================================

class TestMaxwell(unittest.TestCase):
    """Tests for the exact Maxwell propagator."""

    def setUp(self):
        self.grid = SpectralGrid(dims=3, L=2 * math.pi, N=16)
        self.c = 1.0

    def test_plane_wave_is_exact(self):
        """Test that propagation reproduces the analytic plane wave."""
        E0, B0 = plane_wave(self.grid, (1, 2, 0), c=self.c)
        E, B = maxwell_propagate(E0, B0, self.grid, 0.7, c=self.c)
        E_ref, B_ref = plane_wave(self.grid, (1, 2, 0), t=0.7, c=self.c)
        assert np.max(np.abs(E - E_ref)) <= 1e-12
        assert np.max(np.abs(B - B_ref)) <= 1e-12

    def test_plane_wave_energy(self):
        """Test (1 / 8 pi) int (E^2 + B^2) = L^3 / (8 pi) for unit amplitude."""
        E, B = plane_wave(self.grid, (0, 0, 3), c=self.c)
        assert field_energy(E, B, self.grid) == pytest.approx(self.grid.L ** 3 / (8 * math.pi))

    def test_energy_conserved_and_constraints_kept(self):
        """Test energy drift and divergence residuals over many steps."""
        rng = np.random.default_rng(0)
        E0 = transverse_projection(rng.normal(size=(3,) + self.grid.shape), self.grid)
        B0 = transverse_projection(rng.normal(size=(3,) + self.grid.shape), self.grid)
        E, B, energies = maxwell_evolve(E0, B0, self.grid, 0.05, 40, c=self.c)
        assert np.max(np.abs(energies - energies[0])) / energies[0] <= 1e-10
        assert max(divergence_residual(E, B, self.grid).values()) <= 1e-10

    def test_longitudinal_field_rejected(self):
        """Test ConstraintError when div E != 4 pi rho."""
        x = self.grid.coordinates
        E0 = np.array([np.cos(x[0]), np.zeros_like(x[0]), np.zeros_like(x[0])])
        with pytest.raises(ConstraintError) as exc_info:
            maxwell_propagate(E0, np.zeros_like(E0), self.grid, 0.1, c=self.c)
        assert exc_info.value.residuals["E"] > 0.1

    def test_two_dimensional_grid_rejected(self):
        """Test that Maxwell fields need three dimensions."""
        grid = SpectralGrid(dims=2, L=1.0, N=8)
        with pytest.raises(DomainError):
            divergence_residual(np.zeros((3, 8, 8)), np.zeros((3, 8, 8)), grid)

    def test_plane_wave_polarization(self):
        """Test that a longitudinal polarization and k = 0 are rejected."""
        with pytest.raises(DomainError):
            plane_wave(self.grid, (1, 0, 0), polarization=(1, 0, 0))
        with pytest.raises(DomainError):
            plane_wave(self.grid, (0, 0, 0))

    def test_harmonic_source_matches_sampled(self):
        """Test the closed-form Duhamel integral against the midpoint rule."""
        x = self.grid.coordinates
        J = np.array([np.zeros_like(x[0]), np.zeros_like(x[0]), np.sin(x[0])])
        zero = np.zeros((3,) + self.grid.shape)
        harmonic = HarmonicSource(J, nu=2.0)
        sampled = SampledSource(lambda t: J * math.cos(2.0 * t), n_steps=400)
        E1, B1 = maxwell_propagate(zero, zero, self.grid, 0.5, source=harmonic, c=self.c)
        E2, B2 = maxwell_propagate(zero, zero, self.grid, 0.5, source=sampled, c=self.c)
        scale = np.max(np.abs(E1))
        assert scale > 0
        assert np.max(np.abs(E1 - E2)) <= 1e-4 * scale
        assert np.max(np.abs(B1 - B2)) <= 1e-4 * scale

    def test_source_with_mean_rejected(self):
        """Test that a uniform current is rejected."""
        J = np.zeros((3,) + self.grid.shape)
        J[2] = 1.0
        zero = np.zeros_like(J)
        with pytest.raises(ConstraintError):
            maxwell_propagate(zero, zero, self.grid, 0.1, source=HarmonicSource(J, 1.0), c=self.c)


# =============================================================================
# Free dispersion
# =============================================================================

class TestFreePackets(unittest.TestCase):
    """Tests for Schrodinger and Klein-Gordon packets."""

    def setUp(self):
        self.grid = SpectralGrid(dims=1, L=40.0, N=256)
        self.packet = gaussian_packet(self.grid, [0.0], [2.0], 1.0)

    def test_normalized(self):
        """Test unit norm and centroid at the start."""
        assert self.packet.norm2() == pytest.approx(1.0, rel=1e-12)
        assert centroid(self.packet)[0] == pytest.approx(0.0, abs=1e-10)

    def test_width_must_be_positive(self):
        """Test that a zero, negative or nan width is rejected."""
        for width in (0.0, -1.0, float("nan")):
            with pytest.raises(DomainError):
                gaussian_packet(self.grid, [0.0], [2.0], width)

    def test_packet_between_grid_points(self):
        """Test that a packet too narrow to reach any grid point is rejected."""
        with pytest.raises(DomainError):
            gaussian_packet(self.grid, [0.5 * self.grid.dx], [0.0], 1e-3)

    def test_schrodinger_velocity(self):
        """Test centroid velocity k0 / mu."""
        velocity = packet_centroid_velocity(self.packet, "schrodinger", np.linspace(0, 2, 5))
        assert velocity[0] == pytest.approx(2.0, rel=0.02)

    def test_klein_gordon_velocity(self):
        """Test c^2 k / omega with c = 1."""
        wide = gaussian_packet(self.grid, [0.0], [2.0], 2.0)
        velocity = packet_centroid_velocity(
            wide, DispersionKind.KLEIN_GORDON, np.linspace(0, 2, 5), c=1.0
        )
        expected = group_velocity("klein_gordon", [2.0], c=1.0)[0]
        assert expected == pytest.approx(2.0 / math.sqrt(5.0))
        assert velocity[0] == pytest.approx(expected, rel=0.02)

    def test_conserved_functionals(self):
        """Test that charge, energy and momentum do not drift."""
        _, conserved = free_dispersion_evolve(self.packet, "schrodinger", [0.5, 1.0, 3.0])
        assert conserved.charge_drift() <= 1e-12
        assert conserved.energy_drift() <= 1e-12
        assert conserved.momentum_drift() <= 1e-12
        assert conserved.momentum[0][0] == pytest.approx(2.0, rel=1e-6)


# =============================================================================
# Dipole radiation
# =============================================================================

class TestDipoleRadiation(unittest.TestCase):
    """Tests for Hertz dipole fields and retarded potentials."""

    def test_flux_equals_larmor_power(self):
        """Test that the Poynting flux through a far sphere is the Larmor power."""
        source = DipoleSource.harmonic((0.0, 0.0, 1.0), nu=1.0)
        r, t, c = 200.0, 3.0, 1.0
        rule = sphere_rule(6)
        flux = 0.0
        for (theta, phi), w in zip(rule.nodes.T, rule.weights):
            n = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi),
                          math.cos(theta)])
            flux += w * r * r * (hertz_dipole(source, r * n, t, c=c).S @ n)
        assert flux == pytest.approx(radiated_power(source, t - r / c, c=c), rel=1e-8)

    def test_no_radiation_along_axis(self):
        """Test that the field vanishes along the dipole axis."""
        source = DipoleSource.harmonic((0.0, 0.0, 1.0), nu=1.0)
        field_ = hertz_dipole(source, (0.0, 0.0, 50.0), 0.3, c=1.0)
        assert np.max(np.abs(field_.B)) <= 1e-15

    def test_origin_is_singular(self):
        """Test SingularityError at r = 0."""
        source = DipoleSource.harmonic((0.0, 0.0, 1.0), nu=1.0)
        with pytest.raises(SingularityError):
            hertz_dipole(source, (0.0, 0.0, 0.0), 0.0)

    def test_static_dipole_potential(self):
        """Test phi = n.p / r^2 for a static dipole."""
        source = DipoleSource.harmonic((0.0, 0.0, 1.0), nu=0.0)
        phi, A = dipole_potentials(source, (0.0, 0.0, 2.0), 1.0, c=1.0)
        assert phi == pytest.approx(0.25)
        np.testing.assert_allclose(A, 0.0)

    def test_retarded_potential_of_static_ball(self):
        """Test phi = Q / r outside a uniformly charged ball."""
        def rho(t, points):
            return (np.linalg.norm(points, axis=0) <= 1.0).astype(float)

        def j(t, points):
            return np.zeros_like(points)

        phi, A = retarded_potentials(rho, j, (3.0, 0.0, 0.0), 0.0, radius=1.0, c=1.0)
        assert phi == pytest.approx(4 * math.pi / 9, rel=1e-8)
        np.testing.assert_allclose(A, 0.0)

    def test_retarded_source_not_compact(self):
        """Test DomainError when rho extends beyond the declared radius."""
        with pytest.raises(DomainError):
            retarded_potentials(
                lambda t, p: np.ones(p.shape[1]), lambda t, p: np.zeros_like(p),
                (3.0, 0.0, 0.0), 0.0, radius=1.0, c=1.0,
            )


# =============================================================================
# Fresnel
# =============================================================================

class TestFresnel(unittest.TestCase):
    """Tests for reflection and refraction at a planar interface."""

    def test_normal_incidence(self):
        """Test r = (n1 - n2) / (n1 + n2) and R + T = 1."""
        result = fresnel(0.0, 1.0, 1.5, "perp")
        assert result.r == pytest.approx(-0.2)
        assert result.reflectance + result.transmittance == pytest.approx(1.0, abs=1e-12)

    def test_energy_balance_both_polarizations(self):
        """Test R + T = 1 at oblique incidence."""
        for polarization in Polarization:
            result = fresnel(0.6, 1.0, 1.33, polarization)
            assert result.reflectance + result.transmittance == pytest.approx(1.0, abs=1e-12)

    def test_brewster(self):
        """Test that par reflection vanishes at the Brewster angle."""
        alpha = brewster_angle(1.0, 1.5)
        assert abs(fresnel(alpha, 1.0, 1.5, "par").r) <= 1e-10

    def test_total_internal_reflection(self):
        """Test |r| = 1 and no transmission beyond the critical angle."""
        assert critical_angle(1.5, 1.0) == pytest.approx(math.asin(2 / 3))
        result = fresnel(1.2, 1.5, 1.0)
        assert result.total_internal_reflection
        assert abs(result.r) == pytest.approx(1.0, abs=1e-12)
        assert result.transmittance == 0.0
        assert snell_angle(1.2, 1.5, 1.0) is None

    def test_invalid(self):
        """Test grazing incidence and the missing critical angle."""
        with pytest.raises(DomainError):
            fresnel(math.pi / 2, 1.0, 1.5)
        with pytest.raises(DomainError):
            critical_angle(1.0, 1.5)
        with pytest.raises(DomainError):
            fresnel(0.1, -1.0, 1.5)


# =============================================================================
# Classical Zeeman effect
# =============================================================================

class TestClassicalZeeman(unittest.TestCase):
    """Tests for the bound charge in a magnetic field."""

    def setUp(self):
        self.constants = Constants()
        self.B = 0.1 / self.constants.alpha

    def test_mode_relations(self):
        """Test omega_+ - omega_- = 2 |omega_L| and omega_+ omega_- = omega0^2."""
        modes = classical_zeeman_modes(1.0, self.B, self.constants)
        assert modes.omega_plus - modes.omega_minus == pytest.approx(0.1)
        assert modes.omega_plus * modes.omega_minus == pytest.approx(1.0)
        assert modes.omega_pi == 1.0

    def test_spectrum_resolves_three_peaks(self):
        """Test that the integrated motion shows all three modes."""
        modes = classical_zeeman_modes(1.0, self.B, self.constants)
        spectrum = zeeman_oscillator_spectrum(1.0, self.B, constants=self.constants)
        peaks = np.array(spectrum.peaks)
        for mode in modes:
            assert np.min(np.abs(peaks - mode)) <= 2 * spectrum.resolution

    def test_precession(self):
        """Test that spin precesses twice as fast as orbital motion."""
        orbital = larmor_precession_rate(self.B, PrecessionKind.ORBITAL, self.constants)
        spin = larmor_precession_rate(self.B, "spin", self.constants)
        assert spin == pytest.approx(2 * orbital)
        assert orbital == pytest.approx(-0.05)

    def test_invalid_frequency(self):
        """Test omega0 <= 0."""
        with pytest.raises(DomainError):
            classical_zeeman_modes(0.0, 1.0)
