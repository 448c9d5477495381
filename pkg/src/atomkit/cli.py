"""Command-line interface for atomkit.

Every subcommand builds one or more tables in atomic units; the global
``--units`` flag converts them on output. stdout carries data only and all
diagnostics go to stderr through logging.
"""

import argparse
import logging
import math
import sys
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import __version__, angular, fields, oracle, response, scattering, spectra
from .config import UNIT_SYSTEMS, Settings, load_settings, parse_alpha
from .errors import AtomkitError, ConfigurationError, ErrorHandler, ForbiddenTransitionError
from .tools.plotter import plot_spectrum, plot_table
from .tools.snapshots import FieldSnapshot, vector_components, write_snapshot_raw
from .tools.tables import Column, Table, write_tables
from .verification import run_checks

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

Handler = Callable[[argparse.Namespace, Settings], List[Table]]


def _alpha_type(raw: str) -> float:
    try:
        value = parse_alpha(raw)
    except ConfigurationError as e:
        raise argparse.ArgumentTypeError(e.message) from e
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {raw}")
    return value


def _angles(count: int, start: float = 0.1, stop: float = math.pi) -> np.ndarray:
    return np.linspace(start, stop, count)


# --- spectra ---------------------------------------------------------------

def cmd_spectrum(args: argparse.Namespace, settings: Settings) -> List[Table]:
    table = Table("hydrogen levels", [Column("n"), Column("E", "energy"), Column("degeneracy")])
    for n in range(1, args.n_max + 1):
        table.add_row(n, spectra.schrodinger_level(n), spectra.degeneracy(n))
    return [table]


def cmd_series(args: argparse.Namespace, settings: Settings) -> List[Table]:
    name = spectra.SERIES_NAMES.get(args.lower, f"m={args.lower}")
    table = Table(f"{name} series", [
        Column("series"), Column("n_upper"), Column("n_lower"), Column("omega", "frequency"),
    ])
    for line in spectra.series_lines(args.lower, range(args.lower + 1, args.n_max + 1)):
        table.add_row(name, line.upper.n, line.lower.n, line.omega)
    table.add_row(name, "inf", args.lower, spectra.series_limit(args.lower))
    return [table]


def _anomalous_table(args: argparse.Namespace, settings: Settings) -> Table:
    L, J = int(args.upper[0]), angular.half_int(args.upper[1])
    L2, J2 = int(args.lower[0]), angular.half_int(args.lower[1])
    table = Table("anomalous Zeeman lines", [
        Column("M"), Column("M_lower"), Column("delta_M"), Column("omega", "frequency"),
    ])
    for twice in range(-J.twice, J.twice + 1, 2):
        for twice2 in range(-J2.twice, J2.twice + 1, 2):
            M, M2 = angular.HalfInt(twice), angular.HalfInt(twice2)
            if abs(twice - twice2) > 2:
                continue
            line = spectra.anomalous_zeeman_lines(
                (L, J, M), (L2, J2, M2), args.omega0, args.B, settings.constants,
                strict_j_rule=not args.allow_delta_j0,
                g_upper=args.g_upper, g_lower=args.g_lower,
            )
            table.add_row(str(M), str(M2), line.delta_m, line.omega)
    if not table.rows:
        raise ForbiddenTransitionError(f"no dipole lines between J = {J} and J' = {J2}")
    return table


def cmd_zeeman(args: argparse.Namespace, settings: Settings) -> List[Table]:
    if args.anomalous:
        return [_anomalous_table(args, settings)]
    if args.triplet is not None:
        table = Table("normal Zeeman triplet", [
            Column("delta_M"), Column("kind"), Column("omega", "frequency"),
        ])
        for line in spectra.normal_zeeman_triplet(args.triplet, args.B, settings.constants):
            table.add_row(line.delta_m, line.kind.value, line.omega)
        return [table]
    table = Table(f"Zeeman levels n={args.n} l={args.l} ({args.mode})", [
        Column("m"), Column("E", "energy"),
    ])
    for m in range(-args.l, args.l + 1):
        table.add_row(m, spectra.zeeman_levels(
            args.n, args.l, m, args.B, args.mode, settings.constants
        ))
    return [table]


def cmd_dirac(args: argparse.Namespace, settings: Settings) -> List[Table]:
    alpha = settings.constants.alpha
    columns = [Column("n_r"), Column("l"), Column("E_over_mc2"), Column("binding", "energy")]
    if args.approx:
        columns += [Column("E_over_mc2_approx"), Column("difference")]
    table = Table("Dirac level", columns)
    exact = spectra.dirac_level(args.nr, args.l, alpha)
    row = [args.nr, args.l, exact, (exact - 1.0) * settings.constants.rest_energy]
    if args.approx:
        approx = spectra.dirac_level_approx(args.nr, args.l, alpha)
        row += [approx, exact - approx]
    table.add_row(*row)
    return [table]


def cmd_select(args: argparse.Namespace, settings: Settings) -> List[Table]:
    columns = [Column("l"), Column("m"), Column("l2"), Column("m2"), Column("allowed")]
    with_quadrature = args.n is not None and args.n2 is not None
    if with_quadrature:
        columns += [Column(f"abs_{axis}", "length") for axis in oracle.AXES]
    table = Table("dipole selection rule", columns)
    row = [args.l, args.m, args.l2, args.m2,
           spectra.selection_allowed(args.l, args.m, args.l2, args.m2)]
    if with_quadrature:
        vector = oracle.dipole_vector((args.n, args.l, args.m), (args.n2, args.l2, args.m2))
        row += [float(abs(v)) for v in vector]
    table.add_row(*row)
    return [table]


# --- scattering --------------------------------------------------------------

def cmd_thomson(args: argparse.Namespace, settings: Settings) -> List[Table]:
    r_e = settings.constants.classical_radius
    if args.total:
        table = Table("Thomson total cross section", [
            Column("sigma_over_re2"), Column("sigma", "area"),
        ])
        table.add_row(scattering.thomson_total(r_e=1.0), scattering.thomson_total(r_e=r_e))
        return [table]
    table = Table("Thomson differential cross section", [Column("theta"), Column("D", "area")])
    for theta in _angles(args.count, 0.0):
        value = (scattering.thomson_unpolarized(theta, r_e) if args.unpolarized
                 else scattering.thomson_differential(args.phi, theta, r_e))
        table.add_row(float(theta), float(value))
    return [table]


def cmd_rutherford(args: argparse.Namespace, settings: Settings) -> List[Table]:
    table = Table("classical Rutherford cross section", [Column("theta"), Column("D", "area")])
    for theta in _angles(args.count):
        table.add_row(float(theta), scattering.classical_rutherford(
            theta, args.Q, args.Z, args.M, args.v
        ))
    return [table]


def cmd_quantum_rutherford(args: argparse.Namespace, settings: Settings) -> List[Table]:
    table = Table("screened Coulomb cross section", [Column("theta"), Column("D", "area")])
    start = 0.0 if args.eps > 0 else 0.1
    for theta in _angles(args.count, start):
        table.add_row(float(theta), scattering.quantum_rutherford(theta, args.k, args.eps))
    return [table]


def cmd_form_factor(args: argparse.Namespace, settings: Settings) -> List[Table]:
    table = Table("hydrogen ground-state form factor", [
        Column("K"), Column("F_quadrature"), Column("F_closed"),
    ])
    for K in np.linspace(0.0, args.k_max, args.count):
        K = float(K)
        table.add_row(
            K, scattering.atom_form_factor(K / 2.0, math.pi, args.a),
            scattering.form_factor_closed(K, args.a),
        )
    return [table]


def cmd_deflection(args: argparse.Namespace, settings: Settings) -> List[Table]:
    columns = [Column("b", "length"), Column("theta")]
    if args.integrate:
        columns.append(Column("theta_integrated"))
    table = Table("Coulomb deflection angle", columns)
    for b in np.logspace(math.log10(args.b_min), math.log10(args.b_max), args.count):
        b = float(b)
        row = [b, scattering.deflection_angle(b, args.Q, args.Z, args.M, args.v)]
        if args.integrate:
            row.append(scattering.integrate_deflection(b, args.Q, args.Z, args.M, args.v))
        table.add_row(*row)
    return [table]


def cmd_photoeffect(args: argparse.Namespace, settings: Settings) -> List[Table]:
    summary = Table("photoeffect regime", [
        Column("omega", "frequency"), Column("red_bound", "frequency"), Column("regime"),
    ])
    summary.add_row(args.omega, scattering.red_bound(args.omega1),
                    scattering.photo_regime(args.omega, args.omega1).value)
    pattern = Table("photoelectron angular density", [Column("theta"), Column("density")])
    for theta in _angles(args.count, 0.0):
        pattern.add_row(float(theta), float(scattering.photoeffect_pattern(theta, args.phi)))
    return [pattern, summary]


def cmd_kepler(args: argparse.Namespace, settings: Settings) -> List[Table]:
    trajectory = scattering.kepler_trajectory(
        args.x0, args.v0, args.gamma, (0.0, args.t_max), n_samples=args.samples
    )
    orbit = Table("Kepler orbit", [
        Column("t", "time"), Column("x", "length"), Column("y", "length"),
        Column("r", "length"), Column("E", "energy"), Column("angular_momentum"),
    ])
    for i, t in enumerate(trajectory.t):
        x, y = trajectory.positions[i]
        orbit.add_row(float(t), float(x), float(y), float(trajectory.radius[i]),
                      float(trajectory.energy[i]), float(trajectory.angular_momentum[i]))
    conic = trajectory.conic
    summary = Table("orbit classification", [
        Column("type"), Column("E", "energy"), Column("eccentricity"),
        Column("period", "time"), Column("energy_drift"), Column("momentum_drift"),
    ])
    summary.add_row(
        conic.orbit_type.value, conic.energy, conic.eccentricity,
        conic.period if conic.is_bound else None,
        trajectory.energy_drift(), trajectory.angular_momentum_drift(),
    )
    return [orbit, summary]


# --- fields ------------------------------------------------------------------

def cmd_maxwell(args: argparse.Namespace, settings: Settings) -> List[Table]:
    grid = fields.SpectralGrid(dims=3, L=args.L, N=args.n)
    rng = np.random.default_rng(args.seed)
    E = fields.transverse_projection(rng.standard_normal((3,) + grid.shape), grid)
    B = fields.transverse_projection(rng.standard_normal((3,) + grid.shape), grid)
    c = settings.constants.c
    dt = args.dt / c
    table = Table("spectral Maxwell evolution", [
        Column("step"), Column("t", "time"), Column("energy", "energy"),
        Column("relative_drift"), Column("div_E"), Column("div_B"),
    ])
    initial = fields.field_energy(E, B, grid)
    for step in range(args.steps + 1):
        if step:
            E, B = fields.maxwell_propagate(E, B, grid, dt, c=c)
        energy = fields.field_energy(E, B, grid)
        residual = fields.divergence_residual(E, B, grid)
        table.add_row(step, step * dt, energy, abs(energy - initial) / initial,
                      residual["E"], residual["B"])
    if args.snapshot:
        components = {**vector_components("E", E), **vector_components("B", B)}
        snapshot = FieldSnapshot(grid=grid, t=args.steps * dt, components=components)
        header, data = write_snapshot_raw(snapshot, args.snapshot)
        logger.info("field snapshot written to %s and %s", header, data)
    return [table]


def cmd_packet(args: argparse.Namespace, settings: Settings) -> List[Table]:
    grid = fields.SpectralGrid(dims=1, L=args.L, N=args.N)
    c = args.c if args.c is not None else settings.constants.c
    psi0 = fields.gaussian_packet(grid, (args.center,), (args.k0,), args.width)
    times = np.linspace(0.0, args.t_max, args.samples)
    _, conserved = fields.free_dispersion_evolve(psi0, args.kind, times[1:], c=c)
    table = Table(f"{args.kind} packet", [
        Column("t", "time"), Column("centroid", "length"), Column("charge"), Column("energy"),
    ])
    for i, t in enumerate(times):
        psi = psi0 if i == 0 else fields.free_dispersion_evolve(psi0, args.kind, t, c=c)[0]
        table.add_row(float(t), float(fields.centroid(psi)[0]),
                      float(conserved.charge[i]), float(conserved.energy[i]))
    summary = Table("packet velocity", [
        Column("centroid_velocity"), Column("group_velocity"), Column("relative_error"),
    ])
    measured = float(fields.packet_centroid_velocity(psi0, args.kind, times, c=c)[0])
    expected = float(fields.group_velocity(args.kind, (args.k0,), c=c)[0])
    summary.add_row(measured, expected, oracle.relative_error(measured, expected))
    return [table, summary]


def cmd_hertz(args: argparse.Namespace, settings: Settings) -> List[Table]:
    c = settings.constants.c
    source = fields.DipoleSource.harmonic((0.0, 0.0, args.p), args.nu)
    r = args.r if args.r is not None else 100.0 * c / args.nu
    t = r / c + args.t
    table = Table("Hertz dipole angular power", [Column("theta"), Column("dP_dOmega")])
    for theta in _angles(args.count, 0.0):
        n = np.array([math.sin(theta), 0.0, math.cos(theta)])
        S = fields.hertz_dipole(source, r * n, t, c=c).S
        table.add_row(float(theta), float(S @ n * r * r))
    summary = Table("Hertz dipole power", [Column("t_retarded", "time"), Column("power")])
    summary.add_row(t - r / c, fields.radiated_power(source, t - r / c, c=c))
    return [table, summary]


def cmd_zeeman_oscillator(args: argparse.Namespace, settings: Settings) -> List[Table]:
    constants = settings.constants
    B = args.B if args.B is not None else (
        2.0 * constants.mu * constants.c * args.omega_l / abs(constants.e)
    )
    modes = fields.classical_zeeman_modes(args.omega0, B, constants)
    spectrum = fields.zeeman_oscillator_spectrum(
        args.omega0, B, t_max=args.t_max, n_samples=args.samples, constants=constants
    )
    table = Table("oscillator normal modes", [
        Column("mode"), Column("omega", "frequency"), Column("nearest_peak", "frequency"),
        Column("offset_bins"),
    ])
    for name, omega in modes._asdict().items():
        nearest = min(spectrum.peaks, key=lambda p: abs(p - omega), default=None)
        offset = abs(nearest - omega) / spectrum.resolution if nearest is not None else None
        table.add_row(name, omega, nearest, offset)
    return [table]


def cmd_fresnel(args: argparse.Namespace, settings: Settings) -> List[Table]:
    polarizations = ["perp", "par"] if args.polarization == "both" else [args.polarization]
    if args.angle is not None:
        angles = [args.angle]
    else:
        angles = np.linspace(0.0, math.pi / 2, args.count, endpoint=False)
    table = Table("Fresnel coefficients", [
        Column("alpha"), Column("polarization"), Column("R"), Column("T"), Column("tir"),
    ])
    for alpha in angles:
        for polarization in polarizations:
            result = fields.fresnel(float(alpha), args.n1, args.n2, polarization)
            table.add_row(float(alpha), polarization, result.reflectance,
                          result.transmittance, result.total_internal_reflection)
    summary = Table("interface angles", [Column("brewster"), Column("critical")])
    critical = fields.critical_angle(args.n1, args.n2) if args.n2 < args.n1 else None
    summary.add_row(fields.brewster_angle(args.n1, args.n2), critical)
    return [table, summary]


# --- response ----------------------------------------------------------------

def cmd_drude(args: argparse.Namespace, settings: Settings) -> List[Table]:
    specs = args.oscillator or [[1.0, 1.0, 0.1]]
    oscillators = response.OscillatorSet(
        tuple(response.Oscillator(omega=w, f=f, gamma=g) for w, f, g in specs),
        density=args.density,
    )
    table = Table("Drude permittivity", [
        Column("omega", "frequency"), Column("eps_real"), Column("eps_imag"),
    ])
    for omega in np.linspace(args.omega_min, args.omega_max, args.count):
        eps = response.drude_epsilon(float(omega), oscillators)
        table.add_row(float(omega), eps.real, eps.imag)
    return [table]


def cmd_kk(args: argparse.Namespace, settings: Settings) -> List[Table]:
    transitions = response.hydrogen_transitions(args.n_max)
    poles = Table("susceptibility poles", [Column("pole", "frequency"), Column("f")])
    for pole, f in zip(transitions.frequencies, transitions.oscillator_strengths):
        poles.add_row(pole, f)
    table = Table("Kramers-Kronig susceptibility", [
        Column("omega", "frequency"), Column("chi"), Column("epsilon"),
    ])
    for omega in np.linspace(args.omega_min, args.omega_max, args.count):
        omega = float(omega)
        chi = response.kk_susceptibility(omega, transitions, args.density, args.printed_sign)
        table.add_row(omega, chi, 1.0 + 4.0 * math.pi * chi)
    return [table, poles]


def cmd_langevin(args: argparse.Namespace, settings: Settings) -> List[Table]:
    table = Table("Langevin diamagnetic susceptibility", [
        Column("n"), Column("l"), Column("mean_r2", "area"), Column("chi"),
    ])
    mean_r2 = spectra.radial_expectation(args.n, args.l, 2)
    table.add_row(args.n, args.l, mean_r2,
                  response.langevin_chi(mean_r2, args.density, settings.constants))
    return [table]


def cmd_paramagnetic(args: argparse.Namespace, settings: Settings) -> List[Table]:
    table = Table("paramagnetic moment", [Column("m"), Column("moment")])
    for m in range(-args.l, args.l + 1):
        table.add_row(m, response.paramagnetic_moment(m, settings.constants))
    return [table]


def cmd_verify(args: argparse.Namespace, settings: Settings) -> List[Table]:
    table = Table("oracle cross-checks", [
        Column("check"), Column("module"), Column("residual"), Column("tolerance"),
        Column("passed"),
    ])
    for result in run_checks(settings, quick=args.quick):
        table.add_row(result.name, result.module, result.residual, result.tolerance,
                      result.passed)
    return [table]


# --- parser ------------------------------------------------------------------

def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool):
    """Global flags; subparsers use SUPPRESS so a flag given before the subcommand survives."""
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=["csv", "json"], default=default("csv"),
                        help="Output format (default: csv)")
    parser.add_argument("--units", choices=UNIT_SYSTEMS, default=default("atomic"),
                        help="Unit system for dimensional columns (default: atomic)")
    parser.add_argument("--alpha", type=_alpha_type, default=default(None),
                        help="Fine-structure constant, e.g. 0.0073 or 1/137 "
                             "(default: $ATOMKIT_ALPHA or 1/137.035999)")
    parser.add_argument("--plot", metavar="PATH", default=default(None),
                        help="Also save the first table as a PNG figure")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", default=default(False),
                           help="Log debug diagnostics to stderr")
    verbosity.add_argument("--quiet", action="store_true", default=default(False),
                           help="Log errors only")


def _subparser(subparsers, name: str, handler: Handler, help_text: str, epilog: str = ""):
    parser = subparsers.add_parser(
        name, help=help_text, description=help_text, epilog=epilog,
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_global_flags(parser, suppress=True)
    parser.set_defaults(handler=handler)
    return parser


def _group_parser(subparsers, name: str, help_text: str) -> argparse.ArgumentParser:
    """Parser of a command family; global flags may also follow the family name."""
    parser = subparsers.add_parser(name, help=help_text, description=help_text)
    _add_global_flags(parser, suppress=True)
    return parser


def _add_rutherford_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--Q", type=float, default=-1.0, help="Projectile charge")
    parser.add_argument("--Z", type=float, default=1.0, help="Target charge number")
    parser.add_argument("--M", type=float, default=1.0, help="Projectile mass")
    parser.add_argument("--v", type=float, default=1.0, help="Asymptotic speed")


def _add_scatter_parsers(subparsers):
    scatter = _group_parser(subparsers, "scatter", "Light and particle scattering")
    kinds = scatter.add_subparsers(dest="kind", required=True, metavar="KIND")

    p = _subparser(kinds, "thomson", cmd_thomson, "Thomson cross section",
                   "columns: theta, D (or sigma_over_re2, sigma with --total)")
    p.add_argument("--total", action="store_true", help="Total cross section 8 pi / 3 r_e^2")
    p.add_argument("--unpolarized", action="store_true", help="Average over polarizations")
    p.add_argument("--phi", type=float, default=0.0, help="Angle to the polarization plane")
    p.add_argument("--count", type=int, default=19, help="Number of angles in [0, pi]")

    p = _subparser(kinds, "rutherford", cmd_rutherford, "Classical Rutherford cross section",
                   "columns: theta, D")
    _add_rutherford_flags(p)
    p.add_argument("--count", type=int, default=20, help="Number of angles in [0.1, pi]")

    p = _subparser(kinds, "quantum-rutherford", cmd_quantum_rutherford,
                   "Screened Coulomb (Born) cross section", "columns: theta, D")
    p.add_argument("--k", type=float, default=1.0, help="Incident wave number")
    p.add_argument("--eps", type=float, default=0.0, help="Screening parameter")
    p.add_argument("--count", type=int, default=20, help="Number of angles")

    p = _subparser(kinds, "form-factor", cmd_form_factor, "Hydrogen ground-state form factor",
                   "columns: K, F_quadrature, F_closed")
    p.add_argument("--k-max", type=float, default=10.0, help="Largest momentum transfer")
    p.add_argument("--a", type=float, default=1.0, help="Bohr radius")
    p.add_argument("--count", type=int, default=21, help="Number of K values")

    p = _subparser(kinds, "deflection", cmd_deflection, "Coulomb deflection angle vs b",
                   "columns: b, theta [, theta_integrated]")
    _add_rutherford_flags(p)
    p.add_argument("--b-min", type=float, default=0.1, help="Smallest impact parameter")
    p.add_argument("--b-max", type=float, default=10.0, help="Largest impact parameter")
    p.add_argument("--count", type=int, default=10, help="Number of impact parameters")
    p.add_argument("--integrate", action="store_true", help="Add the trajectory integration")

    p = _subparser(kinds, "photoeffect", cmd_photoeffect, "Photoelectron angular pattern",
                   "columns: theta, density; then omega, red_bound, regime")
    p.add_argument("--omega", type=float, default=1.0, help="Light frequency")
    p.add_argument("--omega1", type=float, default=-0.5, help="Ground-state energy")
    p.add_argument("--phi", type=float, default=0.0, help="Azimuth from the polarization")
    p.add_argument("--count", type=int, default=19, help="Number of angles in [0, pi]")


def _add_fields_parsers(subparsers):
    group = _group_parser(subparsers, "fields", "Spectral field evolution and radiation")
    kinds = group.add_subparsers(dest="kind_name", required=True, metavar="KIND")

    p = _subparser(kinds, "maxwell", cmd_maxwell, "Source-free spectral Maxwell evolution",
                   "columns: step, t, energy, relative_drift, div_E, div_B")
    p.add_argument("--n", type=int, default=16, help="Grid points per axis")
    p.add_argument("--L", type=float, default=2 * math.pi, help="Box length")
    p.add_argument("--steps", type=int, default=10, help="Number of steps")
    p.add_argument("--dt", type=float, default=0.05, help="Step in units of 1/c")
    p.add_argument("--seed", type=int, default=0, help="Seed of the random initial field")
    p.add_argument("--snapshot", metavar="BASE", help="Write final E, B as BASE.json + BASE.bin")

    p = _subparser(kinds, "packet", cmd_packet, "Free wave packet in one dimension",
                   "columns: t, centroid, charge, energy; then the velocity summary")
    p.add_argument("--kind", choices=[k.value for k in fields.DispersionKind],
                   default="schrodinger", help="Dispersion relation")
    p.add_argument("--k0", type=float, default=2.0, help="Carrier wave number")
    p.add_argument("--width", type=float, default=5.0, help="Packet width")
    p.add_argument("--center", type=float, default=-50.0, help="Initial centre")
    p.add_argument("--L", type=float, default=200.0, help="Box length")
    p.add_argument("--N", type=int, default=2048, help="Grid points")
    p.add_argument("--t-max", type=float, default=30.0, help="Final time")
    p.add_argument("--samples", type=int, default=16, help="Number of sample times")
    p.add_argument("--c", type=float, default=None, help="Speed of light (default 1/alpha)")

    p = _subparser(kinds, "hertz", cmd_hertz, "Far field of an oscillating dipole",
                   "columns: theta, dP_dOmega; then t_retarded, power")
    p.add_argument("--p", type=float, default=1.0, help="Dipole amplitude along z")
    p.add_argument("--nu", type=float, default=0.5, help="Oscillation frequency")
    p.add_argument("--r", type=float, default=None, help="Observation radius (default 100 c/nu)")
    p.add_argument("--t", type=float, default=0.3, help="Retarded time of observation")
    p.add_argument("--count", type=int, default=19, help="Number of angles in [0, pi]")

    p = _subparser(kinds, "zeeman-oscillator", cmd_zeeman_oscillator,
                   "Classical bound charge in a magnetic field",
                   "columns: mode, omega, nearest_peak, offset_bins")
    p.add_argument("--omega0", type=float, default=1.0, help="Binding frequency")
    field = p.add_mutually_exclusive_group()
    field.add_argument("--B", type=float, default=None, help="Field strength (a.u.)")
    field.add_argument("--omega-l", type=float, default=0.05, help="Larmor frequency |omega_L|")
    p.add_argument("--t-max", type=float, default=2000.0, help="Integration time")
    p.add_argument("--samples", type=int, default=2 ** 14, help="Number of samples")


def _add_response_parsers(subparsers):
    group = _group_parser(subparsers, "response", "Dielectric and magnetic response")
    kinds = group.add_subparsers(dest="kind_name", required=True, metavar="KIND")

    p = _subparser(kinds, "drude", cmd_drude, "Damped-oscillator permittivity",
                   "columns: omega, eps_real, eps_imag")
    p.add_argument("--oscillator", type=float, nargs=3, action="append",
                   metavar=("OMEGA", "F", "GAMMA"), help="Oscillator (repeatable)")
    p.add_argument("--density", type=float, default=1.0, help="Number density")
    p.add_argument("--omega-min", type=float, default=0.0, help="First frequency")
    p.add_argument("--omega-max", type=float, default=2.0, help="Last frequency")
    p.add_argument("--count", type=int, default=21, help="Number of frequencies")

    p = _subparser(kinds, "kk", cmd_kk, "Kramers-Kronig susceptibility of hydrogen",
                   "columns: omega, chi, epsilon; then pole, f")
    p.add_argument("--n-max", type=int, default=10, help="Highest np level")
    p.add_argument("--density", type=float, default=1.0, help="Number density")
    p.add_argument("--omega-min", type=float, default=0.0, help="First frequency")
    p.add_argument("--omega-max", type=float, default=0.3, help="Last frequency")
    p.add_argument("--count", type=int, default=7, help="Number of frequencies")
    p.add_argument("--printed-sign", action="store_true",
                   help="Use omega_1 - omega_l, which flips the sign of chi")

    p = _subparser(kinds, "langevin", cmd_langevin, "Diamagnetic susceptibility of a state",
                   "columns: n, l, mean_r2, chi")
    p.add_argument("--n", type=int, default=1, help="Principal quantum number")
    p.add_argument("--l", type=int, default=0, help="Orbital quantum number")
    p.add_argument("--density", type=float, default=1.0, help="Number density")

    p = _subparser(kinds, "paramagnetic", cmd_paramagnetic, "Orbital magnetic moments",
                   "columns: m, moment")
    p.add_argument("--l", type=int, default=1, help="Orbital quantum number")


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with every subcommand."""
    parser = argparse.ArgumentParser(
        prog="atomkit",
        description="atomkit - closed-form atomic physics with numerical cross-checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  atomkit spectrum --n-max 4                 # Hydrogen levels and degeneracies
  atomkit dirac --nr 0 --l 0 --approx        # Dirac level vs binomial expansion
  atomkit scatter thomson --total            # 8 pi / 3 in units of r_e^2
  atomkit --format json fields packet        # Packet centroid as JSON
  atomkit verify --quick                     # Oracle cross-check table
""",
    )
    parser.add_argument("-V", "--version", action="version", version=f"atomkit {__version__}")
    _add_global_flags(parser, suppress=False)
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = _subparser(subparsers, "spectrum", cmd_spectrum, "Hydrogen energy levels",
                   "columns: n, E, degeneracy")
    p.add_argument("--n-max", type=int, default=4, help="Highest principal quantum number")

    p = _subparser(subparsers, "series", cmd_series, "Emission series onto one lower level",
                   "columns: series, n_upper, n_lower, omega (last row is the series limit)")
    p.add_argument("--lower", type=int, default=2, help="Lower level m")
    p.add_argument("--n-max", type=int, default=8, help="Highest upper level")

    p = _subparser(subparsers, "zeeman", cmd_zeeman, "Levels and lines in a magnetic field",
                   "columns: m, E; or delta_M, kind, omega with --triplet; "
                   "or M, M_lower, delta_M, omega with --anomalous")
    p.add_argument("--n", type=int, default=2, help="Principal quantum number")
    p.add_argument("--l", type=int, default=1, help="Orbital quantum number")
    p.add_argument("--B", type=float, default=1.0, help="Field strength (a.u.)")
    p.add_argument("--mode", choices=[m.value for m in spectra.ZeemanMode], default="orbital",
                   help="Spin treatment")
    p.add_argument("--triplet", type=float, metavar="OMEGA0", default=None,
                   help="Print the normal triplet of a line at OMEGA0")
    p.add_argument("--anomalous", action="store_true", help="Print an anomalous multiplet")
    p.add_argument("--upper", nargs=2, metavar=("L", "J"), default=["1", "3/2"],
                   help="Upper term for --anomalous")
    p.add_argument("--lower", nargs=2, metavar=("L", "J"), default=["0", "1/2"],
                   help="Lower term for --anomalous")
    p.add_argument("--omega0", type=float, default=0.375, help="Field-free line frequency")
    p.add_argument("--allow-delta-j0", action="store_true", help="Admit J' = J lines")
    p.add_argument("--g-upper", type=float, default=None, help="Override the upper g factor")
    p.add_argument("--g-lower", type=float, default=None, help="Override the lower g factor")

    p = _subparser(subparsers, "dirac", cmd_dirac, "Dirac hydrogen level",
                   "columns: n_r, l, E_over_mc2, binding [, E_over_mc2_approx, difference]")
    p.add_argument("--nr", type=int, default=0, help="Radial quantum number")
    p.add_argument("--l", type=int, default=0, help="Angular quantum number")
    p.add_argument("--approx", action="store_true", help="Add the binomial expansion")

    p = _subparser(subparsers, "select", cmd_select, "Dipole selection rule",
                   "columns: l, m, l2, m2, allowed [, abs_x, abs_y, abs_z with --n/--n2]")
    p.add_argument("--l", type=int, required=True, help="Initial l")
    p.add_argument("--m", type=int, required=True, help="Initial m")
    p.add_argument("--l2", type=int, required=True, help="Final l")
    p.add_argument("--m2", type=int, required=True, help="Final m")
    p.add_argument("--n", type=int, default=None, help="Initial n for quadrature elements")
    p.add_argument("--n2", type=int, default=None, help="Final n for quadrature elements")

    _add_scatter_parsers(subparsers)

    p = _subparser(subparsers, "kepler", cmd_kepler, "Planar Kepler orbit",
                   "columns: t, x, y, r, E, angular_momentum; then the classification")
    p.add_argument("--x0", type=float, nargs=2, default=[1.0, 0.0], help="Initial position")
    p.add_argument("--v0", type=float, nargs=2, default=[0.0, 1.2], help="Initial velocity")
    p.add_argument("--gamma", type=float, default=1.0, help="Force constant")
    p.add_argument("--t-max", type=float, default=20.0, help="Integration time")
    p.add_argument("--samples", type=int, default=101, help="Number of output samples")

    _add_fields_parsers(subparsers)

    p = _subparser(subparsers, "fresnel", cmd_fresnel, "Reflection at a planar interface",
                   "columns: alpha, polarization, R, T, tir; then brewster, critical")
    p.add_argument("--angle", type=float, default=None, help="Incidence angle (default: sweep)")
    p.add_argument("--n1", type=float, default=1.0, help="Refractive index of incidence side")
    p.add_argument("--n2", type=float, default=1.5, help="Refractive index of far side")
    p.add_argument("--polarization", choices=["perp", "par", "both"], default="both",
                   help="Polarization relative to the plane of incidence")
    p.add_argument("--count", type=int, default=10, help="Number of angles in a sweep")

    _add_response_parsers(subparsers)

    p = _subparser(subparsers, "verify", cmd_verify, "Run every oracle cross-check",
                   "columns: check, module, residual, tolerance, passed")
    p.add_argument("--quick", action="store_true", help="Smaller grids and ranges")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False, level: str = "WARNING"):
    """Send diagnostics to stderr at the level chosen by the flags or the environment."""
    if verbose:
        level = "DEBUG"
    elif quiet:
        level = "ERROR"
    logging.basicConfig(level=level, stream=sys.stderr, format=LOG_FORMAT, force=True)


# Commands whose first table is a list of lines, plotted as a stick spectrum
LINE_PLOT_COLUMNS = {"spectrum": "E", "series": "omega"}


def _save_plot(args: argparse.Namespace, table: Table, settings: Settings) -> str:
    column = LINE_PLOT_COLUMNS.get(args.command)
    if column is None:
        return plot_table(table, args.plot, units=settings.units)
    index = [c.name for c in table.columns].index(column)
    lines = [float(row[index]) for row in table.converted_rows(settings.units)]
    return plot_spectrum(args.plot, lines=lines, title=table.title,
                         xlabel=table.columns[index].header(settings.units))


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and print its tables.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Exit code: 0 on success, 1 on a computation error or a failed
        verification, 2 on invalid flags
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.verbose, args.quiet)
    handler = ErrorHandler(verbose=args.verbose)
    try:
        settings = load_settings(alpha=args.alpha, units=args.units)
        if not (args.verbose or args.quiet):
            logging.getLogger().setLevel(settings.log_level)
        logger.debug("running %s with alpha=%r", args.command, settings.constants.alpha)
        tables = args.handler(args, settings)
        write_tables(tables, sys.stdout, args.format, settings.units)
        if args.plot:
            _save_plot(args, tables[0], settings)
    except (AtomkitError, ArithmeticError, ValueError, OSError) as e:
        return handler.handle(e)

    if args.command == "verify":
        failed = [row[0] for row in tables[0].rows if not row[-1]]
        if failed:
            logger.error("%d check(s) failed: %s", len(failed), ", ".join(failed))
            return 1
    return 0


def main():
    """Main entry point for the CLI."""
    sys.exit(run())


if __name__ == "__main__":
    main()
