"""Scattering of light and charged particles, and Kepler orbits.

Cross sections are returned in atomic units (Bohr radii squared per
steradian) unless an explicit radius is passed; Thomson formulas take the
classical electron radius r_e so that ``r_e=1`` gives results in r_e^2.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .config import Constants
from .errors import ConvergenceError, DomainError, SingularityError

logger = logging.getLogger(__name__)

# Below this angle differential cross sections with a forward divergence raise
THETA_MIN = 1e-6

# Radial cutoff of the 1s density in units of a; exp(-2 * 40) ~ 1e-35
FORM_FACTOR_SUPPORT = 40.0


@dataclass(frozen=True)
class CrossSectionSample:
    """Differential cross section at one direction."""

    theta: float
    value: float
    phi: Optional[float] = None

    def __post_init__(self):
        if not self.value >= 0:
            raise DomainError(f"cross section must be non-negative, got {self.value}")


def sample_cross_section(
    func: Callable[[float], float], thetas: Iterable[float], phi: Optional[float] = None
) -> List[CrossSectionSample]:
    """Evaluate a theta-dependent cross section on a list of angles."""
    return [CrossSectionSample(theta=float(t), value=float(func(t)), phi=phi) for t in thetas]


def _electron_radius(r_e: Optional[float]) -> float:
    return Constants().classical_radius if r_e is None else r_e


def thomson_differential(phi: float, theta: float, r_e: Optional[float] = None) -> float:
    """D = r_e^2 (1 - cos^2(phi) sin^2(theta)) for linearly polarized light."""
    r_e = _electron_radius(r_e)
    return r_e ** 2 * (1.0 - np.cos(phi) ** 2 * np.sin(theta) ** 2)


def thomson_unpolarized(theta: float, r_e: Optional[float] = None) -> float:
    """Polarization average of thomson_differential (cos^2 phi -> 1/2)."""
    r_e = _electron_radius(r_e)
    return r_e ** 2 * (1.0 - 0.5 * np.sin(theta) ** 2)


def thomson_total(r_e: Optional[float] = None) -> float:
    """(8 pi / 3) r_e^2."""
    return 8.0 * math.pi / 3.0 * _electron_radius(r_e) ** 2


def momentum_transfer(k: float, theta: float) -> float:
    """K = k |e_3 - n| = 2 k sin(theta/2)."""
    return 2.0 * k * math.sin(theta / 2.0)


def form_factor_closed(K: float, a: float = 1.0) -> float:
    """(1 + (K a / 2)^2)^-2 for the 1s density of scale a."""
    return (1.0 + (K * a / 2.0) ** 2) ** -2


def atom_form_factor(k: float, theta: float, a: float = 1.0) -> float:
    """Form factor of the 1s density, F = 4 pi int sinc(K r) |psi_1|^2 r^2 dr.

    The Fourier integral is evaluated with an oscillatory-weight rule on
    [0, FORM_FACTOR_SUPPORT * a], beyond which the density has fallen by exp(-80).
    K = 0 returns exactly 1.

    Raises:
        ConvergenceError: If the quadrature reports a failure
    """
    if k < 0 or a <= 0:
        raise DomainError(f"need k >= 0 and a > 0, got k={k}, a={a}")
    K = momentum_transfer(k, theta)
    if K == 0.0:
        return 1.0
    # 4 pi r^2 sin(Kr)/(Kr) e^{-2r/a}/(pi a^3) = (4/(K a^3)) r e^{-2r/a} sin(Kr)
    # the integral is about K a^3 F / 4, so the absolute tolerance scales with K a^3
    result = integrate.quad(
        lambda r: r * math.exp(-2.0 * r / a), 0.0, FORM_FACTOR_SUPPORT * a,
        weight="sin", wvar=K, epsabs=1e-13 * K * a ** 3, epsrel=1e-10, limit=200,
        full_output=1,
    )
    value, error = result[0], result[1]
    if len(result) > 3:
        raise ConvergenceError(f"form factor quadrature failed at K={K}: {result[3]}", [error])
    logger.debug("form factor K=%.6g quad error %.2e", K, error)
    return 4.0 / (K * a ** 3) * value


def light_scattering_cross_section(
    k: float, theta: float, phi: float, a: float = 1.0, r_e: Optional[float] = None
) -> float:
    """Quantum cross section |F|^2 times the Thomson formula."""
    return atom_form_factor(k, theta, a) ** 2 * thomson_differential(phi, theta, r_e)


def _check_angle(theta: float, singular: bool = True):
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"scattering angle {theta} must lie in [0, pi]")
    if singular and theta < THETA_MIN:
        raise SingularityError(
            f"forward singularity: cross section diverges at theta = {theta}",
            suggestion=f"Use theta >= {THETA_MIN}.",
        )


def classical_rutherford(theta: float, Q: float, Z: float, M: float, v: float) -> float:
    """D = (Q |e| Z / (M v^2))^2 / (4 sin^4(theta/2))."""
    _check_angle(theta)
    if M <= 0 or v <= 0:
        raise DomainError(f"need M > 0 and v > 0, got M={M}, v={v}")
    return (Q * Z / (M * v * v)) ** 2 / (4.0 * math.sin(theta / 2.0) ** 4)


def quantum_rutherford(theta: float, k: float, eps: float = 0.0) -> float:
    """|f|^2 for the screened Coulomb amplitude f = 2 / (K^2 + eps^2).

    eps = 0 reproduces the classical formula with Q = e, Z = 1, M v = k.
    """
    if k <= 0 or eps < 0:
        raise DomainError(f"need k > 0 and eps >= 0, got k={k}, eps={eps}")
    _check_angle(theta, singular=eps == 0.0)
    K = momentum_transfer(k, theta)
    return (2.0 / (K * K + eps * eps)) ** 2


def deflection_angle(b: float, Q: float, Z: float, M: float, v: float) -> float:
    """Final angle with cot(theta/2) = M b v^2 / (Q |e| Z), taken in [0, 2 pi).

    Repulsive scattering (QZ > 0) gives angles in (0, pi), attractive in
    (pi, 2 pi).
    """
    if b == 0:
        raise SingularityError("head-on collision: deflection undefined at b = 0")
    if b < 0 or v <= 0 or M <= 0:
        raise DomainError(f"need b > 0, M > 0 and v > 0, got b={b}, M={M}, v={v}")
    return (2.0 * math.atan2(Q * Z, M * b * v * v)) % (2.0 * math.pi)


def integrate_deflection(
    b: float, Q: float, Z: float, M: float, v: float, rtol: float = 1e-10
) -> float:
    """Deflection angle from direct integration of M x'' = Q Z x / |x|^3.

    The particle starts far to the left with speed and offset chosen so that
    its energy and angular momentum equal the asymptotic values (v, b).
    """
    if b <= 0 or v <= 0 or M <= 0:
        raise DomainError(f"need b > 0, M > 0 and v > 0, got b={b}, M={M}, v={v}")
    coupling = Q * Z / M
    d = abs(coupling) / (v * v)
    X = 1e3 * (b + d)
    v_start = math.sqrt(v * v - 2.0 * coupling / X)
    y_start = b * v / v_start
    r_start = math.hypot(X, y_start)

    def rhs(t, s):
        x, y, vx, vy = s
        r3 = (x * x + y * y) ** 1.5
        return [vx, vy, coupling * x / r3, coupling * y / r3]

    def escaped(t, s):
        return math.hypot(s[0], s[1]) - 1.01 * r_start

    escaped.terminal = True
    escaped.direction = 1

    sol = integrate.solve_ivp(
        rhs, (0.0, 20.0 * X / v), [-X, y_start, v_start, 0.0],
        method="DOP853", rtol=rtol, atol=rtol * 1e-3 * min(b, X), events=escaped,
    )
    if sol.status != 1:
        raise ConvergenceError(f"trajectory for b = {b} did not escape: {sol.message}")
    vx, vy = sol.y[2, -1], sol.y[3, -1]
    logger.debug("b=%.4g integrated with %d steps", b, sol.t.size)
    return math.atan2(vy, vx) % (2.0 * math.pi)


class OrbitType(Enum):
    """Conic section of a Kepler orbit."""
    CIRCULAR = "circular"
    ELLIPTICAL = "elliptical"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class ConicSection:
    """Orbit geometry determined by the initial energy and angular momentum."""

    orbit_type: OrbitType
    energy: float
    angular_momentum: float
    eccentricity: float
    gamma: float

    @property
    def is_bound(self) -> bool:
        return self.orbit_type in (OrbitType.CIRCULAR, OrbitType.ELLIPTICAL)

    @property
    def semi_major_axis(self) -> float:
        """a = -gamma / (2 E); infinite for a parabola, negative for a hyperbola."""
        if self.energy == 0:
            return math.inf
        return -self.gamma / (2.0 * self.energy)

    @property
    def periapsis(self) -> float:
        return self.angular_momentum ** 2 / (self.gamma * (1.0 + self.eccentricity))

    @property
    def period(self) -> float:
        """Orbital period of a bound orbit (Kepler's third law)."""
        if not self.is_bound:
            raise DomainError(f"{self.orbit_type.value} orbit has no period")
        return 2.0 * math.pi * math.sqrt(self.semi_major_axis ** 3 / self.gamma)


def classify_orbit(
    x0: Sequence[float], v0: Sequence[float], gamma: float, tol: float = 1e-12
) -> ConicSection:
    """Classify the orbit of x'' = -gamma x / |x|^3 from its initial state."""
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    r0 = float(np.linalg.norm(x0))
    if r0 == 0:
        raise SingularityError("initial position at the force center")
    if gamma <= 0:
        raise DomainError(f"gamma = {gamma} must be positive")
    energy = 0.5 * float(v0 @ v0) - gamma / r0
    momentum = float(x0[0] * v0[1] - x0[1] * v0[0])
    eccentricity = math.sqrt(max(0.0, 1.0 + 2.0 * energy * momentum ** 2 / gamma ** 2))

    scale = gamma / r0
    if abs(energy) <= tol * scale:
        orbit_type = OrbitType.PARABOLIC
    elif energy > 0:
        orbit_type = OrbitType.HYPERBOLIC
    elif eccentricity <= 1e-9:
        orbit_type = OrbitType.CIRCULAR
    else:
        orbit_type = OrbitType.ELLIPTICAL
    return ConicSection(
        orbit_type=orbit_type, energy=energy, angular_momentum=momentum,
        eccentricity=eccentricity, gamma=gamma,
    )


@dataclass(frozen=True)
class Trajectory:
    """Sampled orbit with conserved-quantity records at every sample."""

    t: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    energy: np.ndarray
    angular_momentum: np.ndarray
    conic: ConicSection

    @property
    def radius(self) -> np.ndarray:
        return np.linalg.norm(self.positions, axis=1)

    def energy_drift(self) -> float:
        """Largest relative deviation of the energy from its initial value."""
        return float(np.max(np.abs(self.energy - self.energy[0])) / abs(self.energy[0]))

    def angular_momentum_drift(self) -> float:
        """Largest relative deviation of r^2 phi' from its initial value."""
        m0 = self.angular_momentum[0]
        return float(np.max(np.abs(self.angular_momentum - m0)) / abs(m0))


def kepler_trajectory(
    x0: Sequence[float],
    v0: Sequence[float],
    gamma: float,
    t_span: Tuple[float, float],
    n_samples: int = 2001,
    rtol: float = 1e-12,
) -> Trajectory:
    """Integrate the planar Kepler problem x'' = -gamma x / |x|^3.

    Raises:
        SingularityError: For collision orbits (zero angular momentum)
    """
    conic = classify_orbit(x0, v0, gamma)
    if conic.angular_momentum == 0.0:
        raise SingularityError(
            "collision orbit: zero angular momentum falls into the center",
            suggestion="Give the initial velocity a component perpendicular to x0.",
        )
    r0 = float(np.linalg.norm(x0))

    def rhs(t, s):
        x, y, vx, vy = s
        r3 = (x * x + y * y) ** 1.5
        return [vx, vy, -gamma * x / r3, -gamma * y / r3]

    t_eval = np.linspace(t_span[0], t_span[1], n_samples)
    sol = integrate.solve_ivp(
        rhs, t_span, [*np.asarray(x0, float), *np.asarray(v0, float)],
        method="DOP853", rtol=rtol, atol=rtol * 1e-2 * r0, t_eval=t_eval,
    )
    if not sol.success:
        raise ConvergenceError(f"Kepler integration failed: {sol.message}")

    positions = sol.y[:2].T
    velocities = sol.y[2:].T
    r = np.linalg.norm(positions, axis=1)
    energy = 0.5 * np.sum(velocities ** 2, axis=1) - gamma / r
    momentum = positions[:, 0] * velocities[:, 1] - positions[:, 1] * velocities[:, 0]
    logger.debug("Kepler orbit %s: %d rhs evaluations", conic.orbit_type.value, sol.nfev)
    return Trajectory(
        t=sol.t, positions=positions, velocities=velocities,
        energy=energy, angular_momentum=momentum, conic=conic,
    )


def trajectory_is_bound(
    x0: Sequence[float],
    v0: Sequence[float],
    gamma: float,
    r_escape: float = 1e8,
    t_max: float = 1e15,
    rtol: float = 1e-10,
) -> bool:
    """Decide boundedness by integrating the orbit, without using its energy.

    The orbit is bound when x.v crosses from positive to negative (it turns
    back at an apoapsis) and unbound when it reaches r_escape moving outward.

    Raises:
        SingularityError: For collision orbits (zero angular momentum)
        ConvergenceError: If neither event happens before t_max
    """
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    r0 = float(np.linalg.norm(x0))
    if x0[0] * v0[1] - x0[1] * v0[0] == 0.0:
        raise SingularityError("collision orbit: zero angular momentum falls into the center")

    def rhs(t, s):
        x, y, vx, vy = s
        r3 = (x * x + y * y) ** 1.5
        return [vx, vy, -gamma * x / r3, -gamma * y / r3]

    def turned_back(t, s):
        return s[0] * s[2] + s[1] * s[3]

    turned_back.terminal = True
    turned_back.direction = -1

    def escaped(t, s):
        return math.hypot(s[0], s[1]) - r_escape

    escaped.terminal = True
    escaped.direction = 1

    sol = integrate.solve_ivp(
        rhs, (0.0, t_max), [*x0, *v0], method="DOP853",
        rtol=rtol, atol=rtol * 1e-3 * r0, events=(turned_back, escaped),
    )
    if sol.status != 1:
        raise ConvergenceError(f"orbit neither turned back nor escaped: {sol.message}")
    bound = sol.t_events[0].size > 0
    logger.debug("orbit from %s %s after t=%.4g", x0, "turned back" if bound else "escaped",
                 sol.t[-1])
    return bound


def photoeffect_pattern(theta: float, phi: float) -> float:
    """Angular density (3 / 4 pi) sin^2(theta) cos^2(phi), unit integral over the sphere."""
    return 3.0 / (4.0 * math.pi) * np.sin(theta) ** 2 * np.cos(phi) ** 2


def red_bound(omega1: float) -> float:
    """Photoeffect threshold |omega_1| for a bound level of frequency omega_1 < 0."""
    if omega1 >= 0:
        raise DomainError(f"bound-state frequency must be negative, got {omega1}")
    return abs(omega1)


class PhotoRegime(Enum):
    """Whether light can ionize the bound state."""
    SHORT_RANGE = "short_range"
    LONG_RANGE = "long_range"


def photo_regime(omega: float, omega1: float) -> PhotoRegime:
    """Short-range below the red bound, long-range (photocurrent) above it."""
    if abs(omega) > red_bound(omega1):
        return PhotoRegime.LONG_RANGE
    return PhotoRegime.SHORT_RANGE
