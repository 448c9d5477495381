"""Cross-check suite: every closed form against its independent numerical oracle.

Each check returns a residual and the tolerance it must meet. ``quick``
mode shrinks grids and ranges so the whole suite runs in seconds.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from sympy import Rational

from . import angular, fields, oracle, response, scattering, spectra
from .config import Settings, load_settings
from .errors import AtomkitError
from .quadrature import sphere_rule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one cross-check."""

    name: str
    module: str
    residual: float
    tolerance: float
    passed: bool


Check = Callable[[Settings, bool], Tuple[float, float]]


def check_hydrogen_levels(settings: Settings, quick: bool) -> Tuple[float, float]:
    n_max = 3 if quick else 5
    worst = 0.0
    for l in range(n_max):
        result = oracle.richardson_eigenvalues(l, n_max - l)
        exact = oracle.exact_levels(l, n_max - l)
        worst = max(worst, oracle.max_relative_error(result.values, exact))
    return worst, 1e-6


def check_degeneracy(settings: Settings, quick: bool) -> Tuple[float, float]:
    n_max = 3 if quick else 4
    levels = oracle.hydrogen_oracle_levels(n_max)
    clusters = oracle.cluster_levels(levels, tol=1e-6)
    counts = [c.count for c in clusters]
    expected = [spectra.degeneracy(n) for n in range(1, n_max + 1)]
    return float(counts != expected), 0.0


def check_angular_algebra(settings: Settings, quick: bool) -> Tuple[float, float]:
    worst = 0.0
    for twice in range(0, 10):
        rep = angular.spin_representation(angular.HalfInt(twice))
        worst = max(worst, rep.commutator_residual(), rep.casimir_residual())
    return worst, 1e-12


def harmonic_gram_residual(l_max: int) -> float:
    """Largest deviation of the Y_l^m Gram matrix from the identity."""
    rule = sphere_rule(2 * l_max)
    theta, phi = rule.nodes
    values = np.array([
        angular.spherical_harmonic(l, m)(theta, phi)
        for l in range(l_max + 1) for m in range(-l, l + 1)
    ])
    gram = (values.conj() * rule.weights) @ values.T
    return float(np.max(np.abs(gram - np.eye(len(values)))))


def check_harmonic_gram(settings: Settings, quick: bool) -> Tuple[float, float]:
    return harmonic_gram_residual(4 if quick else 6), 1e-10


def check_spinor_harmonics(settings: Settings, quick: bool) -> Tuple[float, float]:
    worst = 0.0
    for l in range(3 if quick else 4):
        ops = angular.orbital_spin_operators(l)
        for state in angular.spinor_basis(l):
            v = state.vector()
            j, k = state.j.value, state.k.value
            worst = max(
                worst,
                float(np.max(np.abs(ops.j_squared @ v - j * (j + 1) * v))),
                float(np.max(np.abs(ops.j3 @ v - k * v))),
            )
    return worst, 1e-12


def selection_mismatches(n_max: int, tol: float = 1e-8) -> int:
    """Pairs where the quadrature verdict disagrees with selection_allowed."""
    states = [
        (n, l, m) for n in range(1, n_max + 1) for l in range(n) for m in range(-l, l + 1)
    ]
    mismatches = 0
    for a in states:
        for b in states:
            vanishes = all(abs(oracle.dipole_matrix_element(a, b, p)) <= tol for p in range(3))
            if vanishes == spectra.selection_allowed(a[1], a[2], b[1], b[2]):
                mismatches += 1
    return mismatches


def check_selection_rules(settings: Settings, quick: bool) -> Tuple[float, float]:
    return float(selection_mismatches(3 if quick else 4)), 0.0


def check_lande(settings: Settings, quick: bool) -> Tuple[float, float]:
    expected = {(0, "1/2"): Rational(2), (1, "1/2"): Rational(2, 3), (1, "3/2"): Rational(4, 3)}
    failures = sum(angular.lande_g(L, J, exact=True) != g for (L, J), g in expected.items())
    for L in range(0, 5):
        for twice in (2 * L - 1, 2 * L + 1):
            if twice > 0:
                J = angular.HalfInt(twice)
                failures += angular.lande_g(L, J, exact=True) != angular.vector_model_g(
                    L, J, exact=True
                )
    return float(failures), 0.0


def check_dirac_ground(settings: Settings, quick: bool) -> Tuple[float, float]:
    alpha = settings.constants.alpha
    value = spectra.dirac_level(0, 0, alpha)
    return abs(value - math.sqrt(1 - alpha ** 2)) / math.sqrt(1 - alpha ** 2), 1e-14


def check_dirac_expansion(settings: Settings, quick: bool) -> Tuple[float, float]:
    alpha = settings.constants.alpha
    worst = 0.0
    for n_r in range(4):
        for l in range(4 - n_r):
            exact = spectra.dirac_level(n_r, l, alpha)
            diff = abs(exact - spectra.dirac_level_approx(n_r, l, alpha))
            worst = max(worst, diff / alpha ** 4)
    return worst, 5.0


def check_fine_structure(settings: Settings, quick: bool) -> Tuple[float, float]:
    alpha = settings.constants.alpha
    split = spectra.dirac_level(1, 0, alpha) - spectra.dirac_level(0, 1, alpha)
    if split == 0:
        return math.inf, 1.0
    # leading order of the 2s - 2p split is alpha^4 / 32
    return abs(math.log2(abs(split) / alpha ** 4 * 32.0)), 1.0


def check_dirac_series(settings: Settings, quick: bool) -> Tuple[float, float]:
    alpha = settings.constants.alpha
    worst = 0.0
    for n_r in range(4):
        for l in range(3):
            series = spectra.dirac_radial_series(n_r, l, alpha)
            worst = max(worst, *series.residuals.values())
    return worst, 1e-10


def check_bohr_sommerfeld(settings: Settings, quick: bool) -> Tuple[float, float]:
    worst = 0.0
    for n in range(1, 5):
        for l in range(0, n + 1):
            k = n - l
            if l == 0 and k == 0:
                continue
            value = spectra.bohr_sommerfeld_level(k, l)
            worst = max(worst, oracle.relative_error(value, spectra.schrodinger_level(n)))
    return worst, 1e-6


def check_thomson(settings: Settings, quick: bool) -> Tuple[float, float]:
    total = oracle.sphere_quadrature(
        lambda theta, phi: scattering.thomson_differential(phi, theta, r_e=1.0), 2
    )
    return oracle.relative_error(total, scattering.thomson_total(r_e=1.0)), 1e-10


def check_form_factor(settings: Settings, quick: bool) -> Tuple[float, float]:
    worst = 0.0
    for K in np.linspace(0.0, 10.0, 11 if quick else 41):
        value = scattering.atom_form_factor(K / 2.0, math.pi, a=1.0)
        worst = max(worst, abs(value - scattering.form_factor_closed(K, 1.0)))
    return worst, 1e-8


def check_rutherford_limit(settings: Settings, quick: bool) -> Tuple[float, float]:
    worst = 0.0
    k = 1.3
    for theta in np.linspace(0.1, math.pi, 20):
        quantum = scattering.quantum_rutherford(theta, k, 0.0)
        classical = scattering.classical_rutherford(theta, -1.0, 1.0, 1.0, k)
        worst = max(worst, oracle.relative_error(quantum, classical))
    return worst, 1e-13


def check_rutherford_trajectory(settings: Settings, quick: bool) -> Tuple[float, float]:
    worst = 0.0
    for b in np.logspace(-1, 1, 3 if quick else 10):
        for Q in (1.0, -1.0):
            exact = scattering.deflection_angle(b, Q, 1.0, 1.0, 1.0)
            numeric = scattering.integrate_deflection(b, Q, 1.0, 1.0, 1.0)
            diff = abs(exact - numeric)
            worst = max(worst, min(diff, 2 * math.pi - diff))
    return worst, 1e-4


def check_kepler(settings: Settings, quick: bool) -> Tuple[float, float]:
    conic = scattering.classify_orbit((1.0, 0.0), (0.0, 1.2), 1.0)
    trajectory = scattering.kepler_trajectory(
        (1.0, 0.0), (0.0, 1.2), 1.0, (0.0, (3 if quick else 10) * conic.period)
    )
    return max(trajectory.energy_drift(), trajectory.angular_momentum_drift()), 1e-8


NEAR_PARABOLIC_STATES = (
    ((1.0, 0.0), (0.0, math.sqrt(2.0 * (1.0 - 1e-3)))),
    ((1.0, 0.0), (0.0, math.sqrt(2.0 * (1.0 + 1e-3)))),
)


def classification_mismatches(n_orbits: int = 30, seed: int = 1) -> int:
    """Initial states whose conic disagrees with the integrated trajectory.

    Random states plus one state on either side of the parabolic limit,
    each compared with trajectory_is_bound.
    """
    rng = np.random.default_rng(seed)
    states = [(rng.uniform(-2.0, 2.0, 2), rng.uniform(-1.5, 1.5, 2)) for _ in range(n_orbits)]
    mismatches = 0
    for x0, v0 in [*states, *NEAR_PARABOLIC_STATES]:
        conic = scattering.classify_orbit(x0, v0, 1.0)
        bound = scattering.trajectory_is_bound(x0, v0, 1.0)
        if conic.is_bound != bound:
            logger.debug("conic %s but trajectory bound=%s for x0=%s v0=%s",
                         conic.orbit_type.value, bound, x0, v0)
            mismatches += 1
    return mismatches


def check_conic_classification(settings: Settings, quick: bool) -> Tuple[float, float]:
    return float(classification_mismatches(10 if quick else 30)), 0.0


def check_maxwell_energy(settings: Settings, quick: bool) -> Tuple[float, float]:
    n = 16 if quick else 64
    grid = fields.SpectralGrid(dims=3, L=2 * math.pi, N=n)
    rng = np.random.default_rng(0)
    E0 = fields.transverse_projection(rng.standard_normal((3,) + grid.shape), grid)
    B0 = fields.transverse_projection(rng.standard_normal((3,) + grid.shape), grid)
    c = settings.constants.c
    E, B, energies = fields.maxwell_evolve(E0, B0, grid, dt=0.05 / c, steps=100, c=c)
    drift = float(np.max(np.abs(energies - energies[0])) / energies[0])
    constraint = max(fields.divergence_residual(E, B, grid).values())
    return max(drift, constraint), 1e-10


def check_plane_wave(settings: Settings, quick: bool) -> Tuple[float, float]:
    grid = fields.SpectralGrid(dims=3, L=2 * math.pi, N=16)
    c = settings.constants.c
    E0, B0 = fields.plane_wave(grid, (0, 0, 2), c=c)
    t = 0.37 / c
    E, B = fields.maxwell_propagate(E0, B0, grid, t, c=c)
    E_exact, B_exact = fields.plane_wave(grid, (0, 0, 2), t=t, c=c)
    return float(max(np.max(np.abs(E - E_exact)), np.max(np.abs(B - B_exact)))), 1e-12


def _packet_error(kind: str, c: Optional[float]) -> float:
    grid = fields.SpectralGrid(dims=1, L=200.0, N=2048)
    k_star = 2.0
    psi0 = fields.gaussian_packet(grid, center=(-50.0,), k0=(k_star,), width=5.0)
    velocity = fields.packet_centroid_velocity(psi0, kind, np.linspace(0.0, 30.0, 16), c=c)[0]
    expected = fields.group_velocity(kind, (k_star,), c=c)[0]
    return abs(velocity - expected) / expected


def check_packet_velocity(settings: Settings, quick: bool) -> Tuple[float, float]:
    return max(_packet_error("schrodinger", None), _packet_error("klein_gordon", 1.0)), 0.02


def check_hertz_power(settings: Settings, quick: bool) -> Tuple[float, float]:
    c = settings.constants.c
    nu = 0.5
    source = fields.DipoleSource.harmonic((0.0, 0.0, 1.0), nu)
    r = 100.0 * c / nu
    t = r / c + 0.3
    rule = sphere_rule(4)
    flux = []
    for theta, phi in rule.nodes.T:
        n = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi),
                      math.cos(theta)])
        flux.append(fields.hertz_dipole(source, r * n, t, c=c).S @ n * r * r)
    power = float(np.sum(rule.weights * np.array(flux)))
    expected = fields.radiated_power(source, t - r / c, c=c)
    axial = float(np.linalg.norm(fields.hertz_dipole(source, (0.0, 0.0, r), t, c=c).S))
    return max(oracle.relative_error(power, expected), axial), 1e-8


def check_fresnel(settings: Settings, quick: bool) -> Tuple[float, float]:
    worst = 0.0
    for alpha in np.linspace(0.0, math.pi / 2, 100, endpoint=False):
        for polarization in ("perp", "par"):
            result = fields.fresnel(alpha, 1.0, 1.5, polarization)
            worst = max(worst, abs(result.reflectance + result.transmittance - 1.0))
    return worst, 1e-12


def check_brewster(settings: Settings, quick: bool) -> Tuple[float, float]:
    return fields.fresnel(fields.brewster_angle(1.0, 1.5), 1.0, 1.5, "par").reflectance, 1e-10


def check_classical_zeeman(settings: Settings, quick: bool) -> Tuple[float, float]:
    constants = settings.constants
    omega_l = 0.05
    B = 2.0 * constants.mu * constants.c * omega_l / abs(constants.e)
    modes = fields.classical_zeeman_modes(1.0, B, constants)
    spectrum = fields.zeeman_oscillator_spectrum(
        1.0, B, t_max=1000.0 if quick else 2000.0, n_samples=2 ** 13 if quick else 2 ** 14,
        constants=constants,
    )
    if not spectrum.peaks:
        return math.inf, 2.0
    bins = max(min(abs(p - w) for p in spectrum.peaks) for w in modes) / spectrum.resolution
    ratio = fields.larmor_precession_rate(B, "spin", constants) / fields.larmor_precession_rate(
        B, "orbital", constants
    )
    return max(bins, abs(ratio - 2.0)), 2.0


def check_response(settings: Settings, quick: bool) -> Tuple[float, float]:
    transitions = response.hydrogen_transitions(n_max=4 if quick else 10)
    first_pole = response.kk_poles(transitions)[0]
    static = response.kk_susceptibility(0.0, transitions)
    langevin = response.langevin_chi_for_state(1, 0, constants=settings.constants)
    alpha = settings.constants.alpha
    residual = max(
        abs(first_pole - 0.375),
        oracle.relative_error(langevin, -alpha ** 2 / 2.0),
        0.0 if static > 0 else math.inf,
    )
    return residual, 1e-8


CHECKS: List[Tuple[str, str, Check]] = [
    ("hydrogen levels vs finite differences", "oracle", check_hydrogen_levels),
    ("degeneracy n^2 by clustering", "oracle", check_degeneracy),
    ("commutators and Casimir, J <= 9/2", "angular", check_angular_algebra),
    ("spherical harmonic Gram matrix", "angular", check_harmonic_gram),
    ("spinor harmonics are J^2, J3 eigenvectors", "angular", check_spinor_harmonics),
    ("selection rules vs dipole quadrature", "oracle", check_selection_rules),
    ("Lande factors exact and vector model", "angular", check_lande),
    ("Dirac ground state sqrt(1 - alpha^2)", "spectra", check_dirac_ground),
    ("Dirac binomial expansion / alpha^4", "spectra", check_dirac_expansion),
    ("fine-structure 2s-2p split order", "spectra", check_fine_structure),
    ("Dirac radial series residuals", "spectra", check_dirac_series),
    ("Bohr-Sommerfeld quantization", "spectra", check_bohr_sommerfeld),
    ("Thomson total by sphere quadrature", "scattering", check_thomson),
    ("form factor quadrature vs closed form", "scattering", check_form_factor),
    ("quantum Rutherford eps -> 0", "scattering", check_rutherford_limit),
    ("Rutherford trajectory deflection", "scattering", check_rutherford_trajectory),
    ("Kepler conservation drift", "scattering", check_kepler),
    ("conic classification vs integrated trajectory", "scattering", check_conic_classification),
    ("Maxwell energy and constraints", "fields", check_maxwell_energy),
    ("Maxwell plane-wave translation", "fields", check_plane_wave),
    ("packet group velocity", "fields", check_packet_velocity),
    ("Hertz dipole radiated power", "fields", check_hertz_power),
    ("Fresnel R + T = 1", "fields", check_fresnel),
    ("Brewster angle reflectance", "fields", check_brewster),
    ("classical Zeeman spectrum peaks (bins)", "fields", check_classical_zeeman),
    ("Kramers-Kronig poles, Langevin 1s", "response", check_response),
]


def run_checks(settings: Optional[Settings] = None, quick: bool = False) -> List[CheckResult]:
    """Run every registered check; failures inside a check are reported, not raised."""
    settings = settings or load_settings()
    results = []
    for name, module, check in CHECKS:
        try:
            residual, tolerance = check(settings, quick)
        except (AtomkitError, ArithmeticError, ValueError) as e:
            logger.error("check %r raised %s: %s", name, type(e).__name__, e)
            residual, tolerance = math.inf, 0.0
        passed = bool(residual <= tolerance)
        logger.debug("%s: residual %.3e (tol %.1e) %s", name, residual, tolerance,
                     "ok" if passed else "FAILED")
        results.append(CheckResult(name, module, float(residual), tolerance, passed))
    return results
