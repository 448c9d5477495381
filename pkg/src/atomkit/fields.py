"""Exact spectral evolution of free fields and classical radiation.

Spectral fields live on a periodic box with the numpy FFT convention, so
the gradient becomes multiplication by i k. Maxwell's equations are
evolved through the complex combination C = E + iB (Gaussian units), for
which dC/dt = -ic curl C - 4 pi j and each Fourier mode obeys
dC/dt = c (k x C) - 4 pi j.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate
from scipy.signal import find_peaks

from .config import Constants
from .errors import ConstraintError, ConvergenceError, DomainError, SingularityError
from .quadrature import gauss_legendre, sphere_rule

logger = logging.getLogger(__name__)

CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True)
class SpectralGrid:
    """Periodic box [-L/2, L/2)^dims with N points per axis."""

    dims: int
    L: float
    N: int

    def __post_init__(self):
        if self.dims not in (1, 2, 3):
            raise DomainError(f"dims = {self.dims} must be 1, 2 or 3")
        if self.N < 2 or self.L <= 0:
            raise DomainError(f"need N >= 2 and L > 0, got N={self.N}, L={self.L}")

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.N,) * self.dims

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def cell_volume(self) -> float:
        return self.dx ** self.dims

    @property
    def axis(self) -> np.ndarray:
        """Coordinates along one axis."""
        return -0.5 * self.L + self.dx * np.arange(self.N)

    @property
    def coordinates(self) -> np.ndarray:
        """Array of shape (dims, N, ..., N) with the position of every point."""
        return np.array(np.meshgrid(*([self.axis] * self.dims), indexing="ij"))

    @property
    def wave_vectors(self) -> np.ndarray:
        """Array of shape (dims, N, ..., N) with k_j = 2 pi n_j / L."""
        k1 = 2.0 * np.pi * np.fft.fftfreq(self.N, d=self.dx)
        return np.array(np.meshgrid(*([k1] * self.dims), indexing="ij"))

    @property
    def _fft_axes(self) -> Tuple[int, ...]:
        return tuple(range(-self.dims, 0))

    def to_spectral(self, values: np.ndarray) -> np.ndarray:
        """FFT over the spatial axes (the trailing dims axes)."""
        return np.fft.fftn(values, axes=self._fft_axes)

    def to_physical(self, coefficients: np.ndarray) -> np.ndarray:
        return np.fft.ifftn(coefficients, axes=self._fft_axes)

    def integrate(self, values: np.ndarray) -> float:
        """Riemann sum over the box (exact for trigonometric polynomials)."""
        return float(np.sum(values) * self.cell_volume)

    def spectral_norm2(self, coefficients: np.ndarray) -> float:
        """int |f|^2 dx computed from the coefficients via Parseval."""
        return float(np.sum(np.abs(coefficients) ** 2) * self.cell_volume / self.N ** self.dims)


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients of a scalar or vector field on a SpectralGrid."""

    grid: SpectralGrid
    coefficients: np.ndarray

    @classmethod
    def from_physical(cls, grid: SpectralGrid, values: np.ndarray) -> "SpectralField":
        return cls(grid=grid, coefficients=grid.to_spectral(np.asarray(values, dtype=complex)))

    def physical(self) -> np.ndarray:
        return self.grid.to_physical(self.coefficients)

    def norm2(self) -> float:
        return self.grid.spectral_norm2(self.coefficients)

    def parseval_residual(self) -> float:
        """Relative mismatch between physical and spectral squared norms."""
        physical = self.grid.integrate(np.abs(self.physical()) ** 2)
        spectral = self.norm2()
        return abs(physical - spectral) / max(spectral, np.finfo(float).tiny)

    def hermitian_residual(self) -> float:
        """Deviation from c(-k) = conj(c(k)); zero for real physical fields."""
        axes = self.grid._fft_axes
        flipped = np.roll(np.flip(self.coefficients, axis=axes), 1, axis=axes)
        scale = max(float(np.max(np.abs(self.coefficients))), np.finfo(float).tiny)
        return float(np.max(np.abs(self.coefficients - np.conj(flipped)))) / scale


@dataclass(frozen=True)
class ConservedSet:
    """Conserved functionals sampled along an evolution."""

    times: np.ndarray
    charge: np.ndarray
    energy: np.ndarray
    momentum: np.ndarray

    @staticmethod
    def _drift(values: np.ndarray) -> float:
        reference = np.max(np.abs(values[0]))
        deviation = np.max(np.abs(values - values[0]))
        return float(deviation / reference) if reference else float(deviation)

    def charge_drift(self) -> float:
        return self._drift(self.charge)

    def energy_drift(self) -> float:
        return self._drift(self.energy)

    def momentum_drift(self) -> float:
        return self._drift(self.momentum)


def _unit_wave_vectors(k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """k / |k| with the k = 0 mode mapped to zero, and |k|."""
    magnitude = np.sqrt(np.sum(k * k, axis=0))
    safe = np.where(magnitude > 0, magnitude, 1.0)
    return np.where(magnitude > 0, k / safe, 0.0), magnitude


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sum(a * b, axis=0)


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def _apply_mode_operator(
    v: np.ndarray, k_hat: np.ndarray, longitudinal, even, odd
) -> np.ndarray:
    """Apply longitudinal * P + even * (I - P) + odd * (k_hat x) mode by mode."""
    projected = k_hat * _dot(k_hat, v)
    return longitudinal * projected + even * (v - projected) + odd * _cross(k_hat, v)


def _check_maxwell_grid(grid: SpectralGrid):
    if grid.dims != 3:
        raise DomainError("Maxwell fields need a three-dimensional grid")


def field_energy(E: np.ndarray, B: np.ndarray, grid: SpectralGrid) -> float:
    """(1 / 8 pi) int (E^2 + B^2)."""
    return grid.integrate(np.sum(E ** 2 + B ** 2, axis=0)) / (8.0 * np.pi)


def divergence_residual(
    E: np.ndarray, B: np.ndarray, grid: SpectralGrid, rho: Optional[np.ndarray] = None
) -> dict:
    """Relative L2 residuals of div E = 4 pi rho and div B = 0, computed spectrally."""
    _check_maxwell_grid(grid)
    k = grid.wave_vectors
    residuals = {}
    for name, vector, source in (("E", E, rho), ("B", B, None)):
        coefficients = grid.to_spectral(vector)
        divergence = 1j * _dot(k, coefficients)
        if source is not None:
            divergence = divergence - 4.0 * np.pi * grid.to_spectral(source)
        scale = math.sqrt(grid.spectral_norm2(np.sqrt(_dot(k, k)) * coefficients))
        absolute = math.sqrt(grid.spectral_norm2(divergence))
        residuals[name] = absolute / scale if scale > 0 else absolute
    return residuals


def transverse_projection(vector: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Remove the longitudinal part, the mean and the Nyquist planes of a real vector field."""
    k = grid.wave_vectors
    k_hat, magnitude = _unit_wave_vectors(k)
    resolved = np.all(np.abs(k) < np.pi / grid.dx * (1.0 - 1e-12), axis=0)
    coefficients = grid.to_spectral(vector)
    coefficients = coefficients - k_hat * _dot(k_hat, coefficients)
    coefficients = np.where((magnitude > 0) & resolved, coefficients, 0.0)
    return grid.to_physical(coefficients).real


def plane_wave(
    grid: SpectralGrid,
    mode: Sequence[int],
    amplitude: float = 1.0,
    polarization: Optional[Sequence[float]] = None,
    t: float = 0.0,
    c: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Plane wave E = E0 cos(k.x - c|k|t) e, B = k_hat x E on a lattice mode."""
    _check_maxwell_grid(grid)
    c = Constants().c if c is None else c
    k = 2.0 * np.pi * np.asarray(mode, dtype=float) / grid.L
    kk = float(np.linalg.norm(k))
    if kk == 0:
        raise DomainError("plane wave needs a nonzero wave vector")
    k_hat = k / kk
    if polarization is None:
        trial = np.array([1.0, 0.0, 0.0]) if abs(k_hat[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        polarization = trial - k_hat * (trial @ k_hat)
    e = np.asarray(polarization, dtype=float)
    if abs(e @ k_hat) > 1e-12 * np.linalg.norm(e):
        raise DomainError("polarization must be perpendicular to the wave vector")
    e = e / np.linalg.norm(e)
    b = np.cross(k_hat, e)
    x = grid.coordinates
    phase = np.cos(np.tensordot(k, x, axes=1) - c * kk * t)
    E = amplitude * e[:, None, None, None] * phase
    B = amplitude * b[:, None, None, None] * phase
    return E, B


class HarmonicSource:
    """Current j(t, x) = J(x) cos(nu t) with its continuity-consistent charge.

    rho(t) = rho0 - div J sin(nu t) / nu, and the Duhamel integral is done in
    closed form mode by mode.
    """

    def __init__(self, current: np.ndarray, nu: float):
        self.current = np.asarray(current, dtype=float)
        self.nu = float(nu)
        if self.nu < 0:
            raise DomainError(f"source frequency nu = {nu} must be non-negative")

    def time_integral(self, t: float) -> float:
        """int_0^t cos(nu s) ds."""
        return t if self.nu == 0 else math.sin(self.nu * t) / self.nu

    def current_at(self, t: float) -> np.ndarray:
        return self.current * math.cos(self.nu * t)

    def charge_density(self, t: float, rho0: np.ndarray, grid: SpectralGrid) -> np.ndarray:
        divergence = grid.to_physical(1j * _dot(grid.wave_vectors, grid.to_spectral(self.current)))
        return rho0 - divergence.real * self.time_integral(t)

    def duhamel(self, t: float, grid: SpectralGrid, c: float) -> np.ndarray:
        """int_0^t U(t - s) J_hat cos(nu s) ds for every mode."""
        k_hat, magnitude = _unit_wave_vectors(grid.wave_vectors)
        omega = c * magnitude
        J_hat = grid.to_spectral(self.current)
        oscillating = 0.5 * (
            _phase_integral(omega, self.nu, t) + _phase_integral(omega, -self.nu, t)
        )
        return _apply_mode_operator(
            J_hat, k_hat, self.time_integral(t), oscillating.real, oscillating.imag
        )


def _phase_integral(a: np.ndarray, b: float, t: float) -> np.ndarray:
    """int_0^t exp(i a (t - s)) exp(i b s) ds, stable at a = b."""
    z = 1j * (b - a) * t
    small = np.abs(z) < 1e-6
    safe = np.where(small, 1.0, z)
    ratio = np.where(small, 1.0 + z / 2.0 + z * z / 6.0, (np.exp(safe) - 1.0) / safe)
    return t * np.exp(1j * a * t) * ratio


class SampledSource:
    """Arbitrary current j(t, x), Duhamel integral by the midpoint rule in time."""

    def __init__(
        self,
        current: Callable[[float], np.ndarray],
        charge: Optional[Callable[[float], np.ndarray]] = None,
        n_steps: int = 200,
    ):
        self.current = current
        self.charge = charge
        self.n_steps = int(n_steps)

    def current_at(self, t: float) -> np.ndarray:
        return np.asarray(self.current(t), dtype=float)

    def charge_density(self, t: float, rho0: np.ndarray, grid: SpectralGrid) -> np.ndarray:
        return rho0 if self.charge is None else np.asarray(self.charge(t), dtype=float)

    def duhamel(self, t: float, grid: SpectralGrid, c: float) -> np.ndarray:
        k_hat, magnitude = _unit_wave_vectors(grid.wave_vectors)
        omega = c * magnitude
        ds = t / self.n_steps
        total = np.zeros((3,) + grid.shape, dtype=complex)
        for i in range(self.n_steps):
            s = (i + 0.5) * ds
            tau = t - s
            J_hat = grid.to_spectral(self.current_at(s))
            total += ds * _apply_mode_operator(
                J_hat, k_hat, 1.0, np.cos(omega * tau), np.sin(omega * tau)
            )
        return total


Source = Union[HarmonicSource, SampledSource]


def maxwell_propagate(
    E0: np.ndarray,
    B0: np.ndarray,
    grid: SpectralGrid,
    t: float,
    source: Optional[Source] = None,
    rho0: Optional[np.ndarray] = None,
    c: Optional[float] = None,
    tol: float = CONSTRAINT_TOL,
) -> Tuple[np.ndarray, np.ndarray]:
    """Advance (E, B) by time t with the exact per-mode propagator.

    Each mode evolves by U(t) = P + (I - P) cos(c|k|t) + (k_hat x) sin(c|k|t);
    the k = 0 mode is left unchanged. Sources enter through the Duhamel
    integral -4 pi int_0^t U(t - s) j_hat(s) ds.

    Raises:
        ConstraintError: If the initial fields violate the divergence
            constraints or the source has a nonzero spatial mean
    """
    _check_maxwell_grid(grid)
    c = Constants().c if c is None else c
    E0 = np.asarray(E0, dtype=float)
    B0 = np.asarray(B0, dtype=float)
    rho0 = np.zeros(grid.shape) if rho0 is None else np.asarray(rho0, dtype=float)

    residuals = divergence_residual(E0, B0, grid, rho0)
    if max(residuals.values()) > tol:
        raise ConstraintError("initial fields violate the divergence constraints", residuals)
    if source is not None:
        mean = np.abs(np.mean(source.current_at(0.0), axis=tuple(range(1, 4))))
        scale = max(float(np.max(np.abs(source.current_at(0.0)))), np.finfo(float).tiny)
        if np.max(mean) > tol * scale:
            raise ConstraintError(
                "source current has a nonzero spatial mean", {"mean": float(np.max(mean))}
            )

    k_hat, magnitude = _unit_wave_vectors(grid.wave_vectors)
    omega = c * magnitude
    C_hat = grid.to_spectral(E0 + 1j * B0)
    C_hat = _apply_mode_operator(C_hat, k_hat, 1.0, np.cos(omega * t), np.sin(omega * t))

    if source is not None:
        C_hat = C_hat - 4.0 * np.pi * source.duhamel(t, grid, c)

    C = grid.to_physical(C_hat)
    logger.debug("maxwell step t=%.6g on %s grid", t, grid.shape)
    return C.real, C.imag


def maxwell_evolve(
    E0: np.ndarray,
    B0: np.ndarray,
    grid: SpectralGrid,
    dt: float,
    steps: int,
    c: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Repeated source-free steps; returns final (E, B) and the energy per step."""
    energies = [field_energy(E0, B0, grid)]
    E, B = E0, B0
    for _ in range(steps):
        E, B = maxwell_propagate(E, B, grid, dt, c=c)
        energies.append(field_energy(E, B, grid))
    return E, B, np.array(energies)


class DispersionKind(Enum):
    """Free-field dispersion relation."""
    SCHRODINGER = "schrodinger"
    KLEIN_GORDON = "klein_gordon"


def dispersion(kind: Union[DispersionKind, str], k: np.ndarray, c: Optional[float] = None,
               mu: float = 1.0) -> np.ndarray:
    """omega(k): k^2 / (2 mu) or sqrt(c^2 k^2 + mu^2 c^4)."""
    kind = DispersionKind(kind)
    k2 = np.sum(k * k, axis=0)
    if kind is DispersionKind.SCHRODINGER:
        return k2 / (2.0 * mu)
    c = Constants().c if c is None else c
    return np.sqrt(c * c * k2 + (mu * c * c) ** 2)


def gaussian_packet(
    grid: SpectralGrid,
    center: Sequence[float],
    k0: Sequence[float],
    width: float,
) -> SpectralField:
    """Normalized packet exp(-|x - x0|^2 / (4 width^2) + i k0.x).

    Raises:
        DomainError: If the width is not positive or the packet misses every grid point
    """
    if not width > 0:
        raise DomainError(f"packet width must be positive, got {width}")
    x = grid.coordinates
    x0 = np.asarray(center, dtype=float).reshape((grid.dims,) + (1,) * grid.dims)
    k0 = np.asarray(k0, dtype=float).reshape((grid.dims,) + (1,) * grid.dims)
    offset = x - x0
    psi = np.exp(-np.sum(offset ** 2, axis=0) / (4.0 * width ** 2) + 1j * np.sum(k0 * x, axis=0))
    norm = grid.integrate(np.abs(psi) ** 2)
    if not norm > 0:
        raise DomainError(f"packet of width {width} vanishes on a grid of spacing {grid.dx}")
    psi /= math.sqrt(norm)
    return SpectralField.from_physical(grid, psi)


def _conserved(field_: SpectralField, omega: np.ndarray) -> Tuple[float, float, np.ndarray]:
    grid = field_.grid
    weight = np.abs(field_.coefficients) ** 2 * grid.cell_volume / grid.N ** grid.dims
    k = grid.wave_vectors
    return (
        float(np.sum(weight)),
        float(np.sum(omega * weight)),
        np.array([float(np.sum(kj * weight)) for kj in k]),
    )


def free_dispersion_evolve(
    psi0: SpectralField,
    kind: Union[DispersionKind, str],
    t: Union[float, Sequence[float]],
    c: Optional[float] = None,
    mu: float = 1.0,
) -> Tuple[SpectralField, ConservedSet]:
    """Multiply every coefficient by exp(-i omega(k) t).

    Args:
        psi0: Initial field
        kind: Dispersion relation
        t: Final time, or a sequence of sample times ending at the final time
        c: Speed of light for Klein-Gordon (default 1/alpha)
        mu: Particle mass

    Returns:
        Field at the last time and the conserved functionals at t = 0 and
        every sample time
    """
    grid = psi0.grid
    omega = dispersion(kind, grid.wave_vectors, c=c, mu=mu)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    samples = [_conserved(psi0, omega)]
    current = psi0
    for time in times:
        current = SpectralField(
            grid=grid, coefficients=psi0.coefficients * np.exp(-1j * omega * time)
        )
        samples.append(_conserved(current, omega))
    conserved = ConservedSet(
        times=np.concatenate([[0.0], times]),
        charge=np.array([s[0] for s in samples]),
        energy=np.array([s[1] for s in samples]),
        momentum=np.array([s[2] for s in samples]),
    )
    return current, conserved


def centroid(field_: SpectralField) -> np.ndarray:
    """Position expectation <x> of |psi|^2."""
    grid = field_.grid
    density = np.abs(field_.physical()) ** 2
    norm = np.sum(density)
    return np.array([float(np.sum(xj * density) / norm) for xj in grid.coordinates])


def packet_centroid_velocity(
    psi0: SpectralField,
    kind: Union[DispersionKind, str],
    times: Sequence[float],
    c: Optional[float] = None,
    mu: float = 1.0,
) -> np.ndarray:
    """Least-squares slope of the centroid trajectory, one component per axis."""
    grid = psi0.grid
    omega = dispersion(kind, grid.wave_vectors, c=c, mu=mu)
    times = np.asarray(times, dtype=float)
    track = np.array([
        centroid(SpectralField(grid=grid, coefficients=psi0.coefficients * np.exp(-1j * omega * t)))
        for t in times
    ])
    return np.array([np.polyfit(times, track[:, j], 1)[0] for j in range(grid.dims)])


def group_velocity(kind: Union[DispersionKind, str], k: Sequence[float],
                   c: Optional[float] = None, mu: float = 1.0) -> np.ndarray:
    """grad omega: k / mu or c^2 k / omega(k)."""
    k = np.asarray(k, dtype=float)
    if DispersionKind(kind) is DispersionKind.SCHRODINGER:
        return k / mu
    c = Constants().c if c is None else c
    return c * c * k / dispersion(kind, k.reshape(-1, 1), c=c, mu=mu)[0]


@dataclass(frozen=True)
class DipoleSource:
    """Point dipole at the origin with moment p(t)."""

    p: Callable[[float], np.ndarray]
    p_dot: Optional[Callable[[float], np.ndarray]] = None
    p_ddot: Optional[Callable[[float], np.ndarray]] = None
    frequency: Optional[float] = None

    @classmethod
    def harmonic(cls, amplitude: Sequence[float], nu: float) -> "DipoleSource":
        """p(t) = p0 cos(nu t)."""
        p0 = np.asarray(amplitude, dtype=float)
        return cls(
            p=lambda t: p0 * math.cos(nu * t),
            p_dot=lambda t: -nu * p0 * math.sin(nu * t),
            p_ddot=lambda t: -nu * nu * p0 * math.cos(nu * t),
            frequency=nu,
        )


class RadiationField(NamedTuple):
    E: np.ndarray
    B: np.ndarray
    S: np.ndarray


def _radial(x: Sequence[float]) -> Tuple[np.ndarray, float, np.ndarray]:
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0:
        raise SingularityError("field point at the dipole position r = 0")
    return x, r, x / r


def hertz_dipole(
    source: DipoleSource, x: Sequence[float], t: float, c: Optional[float] = None
) -> RadiationField:
    """Far-zone fields B = p''(t_r) x n / (c^2 r), E = B x n and the Poynting vector.

    Raises:
        SingularityError: At r = 0
    """
    c = Constants().c if c is None else c
    x, r, n = _radial(x)
    if source.p_ddot is None:
        raise DomainError("hertz_dipole needs the second derivative of p")
    if source.frequency and r * source.frequency / c < 10.0:
        logger.warning("field point r = %.3g is not in the far zone (nu r / c < 10)", r)
    a = np.asarray(source.p_ddot(t - r / c), dtype=float)
    B = np.cross(a, n) / (c * c * r)
    E = np.cross(B, n)
    S = c / (4.0 * np.pi) * np.cross(E, B)
    return RadiationField(E=E, B=B, S=S)


def radiated_power(source: DipoleSource, t: float, c: Optional[float] = None) -> float:
    """Larmor power 2 |p''|^2 / (3 c^3) at retarded time t."""
    c = Constants().c if c is None else c
    a = np.asarray(source.p_ddot(t), dtype=float)
    return 2.0 * float(a @ a) / (3.0 * c ** 3)


def dipole_potentials(
    source: DipoleSource, x: Sequence[float], t: float, c: Optional[float] = None
) -> Tuple[float, np.ndarray]:
    """Exact point-dipole potentials phi = n.(p/r^2 + p'/(c r)), A = p'/(c r) at t - r/c."""
    c = Constants().c if c is None else c
    x, r, n = _radial(x)
    if source.p_dot is None:
        raise DomainError("dipole_potentials needs the first derivative of p")
    tr = t - r / c
    p = np.asarray(source.p(tr), dtype=float)
    pd = np.asarray(source.p_dot(tr), dtype=float)
    return float(n @ (p / r ** 2 + pd / (c * r))), pd / (c * r)


def _ball_rule(n: int, center: np.ndarray, radius: float):
    """Product Gauss rule over a ball: points (3, m) and weights (m,)."""
    radial = gauss_legendre(n, 0.0, radius)
    angular = sphere_rule(2 * n - 1)
    theta, phi = angular.nodes
    directions = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    s = radial.nodes
    points = center[:, None, None] + directions[:, None, :] * s[None, :, None]
    weights = (radial.weights * s * s)[:, None] * angular.weights[None, :]
    return points.reshape(3, -1), weights.ravel()


def _check_compact(rho: Callable, j: Callable, radius: float, times: Sequence[float]):
    rule = sphere_rule(8)
    theta, phi = rule.nodes
    shell = 1.05 * radius * np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )
    inner = 0.5 * shell
    m = shell.shape[1]
    for t in times:
        at = np.full(m, t)
        outside = max(np.max(np.abs(rho(at, shell))), np.max(np.abs(j(at, shell))))
        inside = max(np.max(np.abs(rho(at, inner))), np.max(np.abs(j(at, inner))), 1.0)
        if outside > 1e-12 * inside:
            raise DomainError(
                f"source does not vanish outside the declared radius {radius}",
                suggestion="Increase the support radius.",
            )


def retarded_potentials(
    rho: Callable[[float, np.ndarray], np.ndarray],
    j: Callable[[float, np.ndarray], np.ndarray],
    x: Sequence[float],
    t: float,
    radius: float,
    c: Optional[float] = None,
    tol: float = 1e-8,
    max_nodes: int = 128,
) -> Tuple[float, np.ndarray]:
    """phi = int rho(t - |x - y|/c, y) / |x - y| dy and A = (1/c) int j(...) / |x - y| dy.

    Sources are vectorized callables of (t, points) with points of shape
    (3, m); rho returns (m,), j returns (3, m). Both must vanish for
    |y| > radius. The ball rule is doubled until successive estimates agree.

    Raises:
        DomainError: If the source is not supported in the declared ball
        ConvergenceError: If the nested rules do not agree within max_nodes
    """
    c = Constants().c if c is None else c
    x = np.asarray(x, dtype=float)
    r_x = float(np.linalg.norm(x))
    _check_compact(rho, j, radius, [t - (r_x + radius) / c, t - r_x / c, t])

    # centering the ball on x absorbs the 1/|x-y| singularity into the Jacobian
    inside = r_x <= radius
    center = x if inside else np.zeros(3)
    extent = r_x + radius if inside else radius

    def estimate(n):
        points, weights = _ball_rule(n, center, extent)
        distance = np.linalg.norm(points - x[:, None], axis=0)
        distance = np.where(distance > 0, distance, np.inf)
        retarded = t - distance / c
        phi = np.sum(weights * rho_at(retarded, points) / distance)
        A = np.sum(weights * j_at(retarded, points) / distance, axis=1) / c
        return phi, A

    def rho_at(times, points):
        return np.asarray(rho(times, points), dtype=float)

    def j_at(times, points):
        return np.asarray(j(times, points), dtype=float)

    n = 8
    previous = estimate(n)
    trace = []
    while n < max_nodes:
        n *= 2
        current = estimate(n)
        change = max(abs(current[0] - previous[0]), float(np.max(np.abs(current[1] - previous[1]))))
        scale = max(1.0, abs(current[0]), float(np.max(np.abs(current[1]))))
        trace.append(change / scale)
        if trace[-1] <= tol:
            logger.debug("retarded potentials converged with %d nodes per axis", n)
            return float(current[0]), current[1]
        previous = current
    raise ConvergenceError("retarded-potential quadrature did not converge", trace)


class Polarization(Enum):
    """Polarization relative to the plane of incidence."""
    PERP = "perp"
    PAR = "par"


@dataclass(frozen=True)
class FresnelResult:
    """Reflection and transmission amplitudes at a planar interface."""

    r: complex
    t: complex
    alpha: float
    alpha_refracted: Optional[float]
    n1: float
    n2: float
    polarization: Polarization
    total_internal_reflection: bool = False

    @property
    def reflectance(self) -> float:
        return abs(self.r) ** 2

    @property
    def transmittance(self) -> float:
        """(n2 cos alpha') / (n1 cos alpha) |t|^2; zero under total internal reflection."""
        if self.total_internal_reflection:
            return 0.0
        ratio = self.n2 * math.cos(self.alpha_refracted) / (self.n1 * math.cos(self.alpha))
        return ratio * abs(self.t) ** 2


def _check_indices(n1: float, n2: float):
    if n1 <= 0 or n2 <= 0:
        raise DomainError(f"refractive indices must be positive, got n1={n1}, n2={n2}")


def snell_angle(alpha: float, n1: float, n2: float) -> Optional[float]:
    """Refraction angle from n1 sin(alpha) = n2 sin(alpha'); None beyond the critical angle."""
    _check_indices(n1, n2)
    s = n1 * math.sin(alpha) / n2
    if s > 1.0:
        return None
    return math.asin(s)


def brewster_angle(n1: float, n2: float) -> float:
    """tan(alpha_B) = n2 / n1."""
    _check_indices(n1, n2)
    return math.atan2(n2, n1)


def critical_angle(n1: float, n2: float) -> float:
    """sin(alpha_c) = n2 / n1, defined only for n2 < n1."""
    _check_indices(n1, n2)
    if n2 >= n1:
        raise DomainError(f"no total internal reflection for n2 = {n2} >= n1 = {n1}")
    return math.asin(n2 / n1)


def fresnel(
    alpha: float, n1: float, n2: float, polarization: Union[Polarization, str] = Polarization.PERP
) -> FresnelResult:
    """Fresnel amplitudes for equal permeabilities.

    perp: r = (n1 cos a - n2 cos a') / (n1 cos a + n2 cos a')
    par:  r = (n2 cos a - n1 cos a') / (n2 cos a + n1 cos a')
    Beyond the critical angle cos a' is imaginary and |r| = 1.
    """
    _check_indices(n1, n2)
    if not 0.0 <= alpha < math.pi / 2:
        raise DomainError(f"incidence angle {alpha} must lie in [0, pi/2)")
    polarization = Polarization(polarization)
    s = n1 * math.sin(alpha) / n2
    tir = s > 1.0
    cos_in = math.cos(alpha)
    cos_out = 1j * math.sqrt(s * s - 1.0) if tir else complex(math.sqrt(1.0 - s * s))
    if polarization is Polarization.PERP:
        a, b = n1 * cos_in, n2 * cos_out
    else:
        a, b = n2 * cos_in, n1 * cos_out
    r = (a - b) / (a + b)
    t = 2.0 * n1 * cos_in / (a + b)
    if not tir:
        r, t = r.real, t.real
    return FresnelResult(
        r=r, t=t, alpha=alpha, alpha_refracted=None if tir else math.asin(s),
        n1=n1, n2=n2, polarization=polarization, total_internal_reflection=tir,
    )


class ZeemanModes(NamedTuple):
    """Axial and circular normal-mode frequencies of a bound charge in B."""

    omega_pi: float
    omega_plus: float
    omega_minus: float


def classical_zeeman_modes(
    omega0: float, B: float, constants: Optional[Constants] = None
) -> ZeemanModes:
    """Exact roots of omega^2 + 2 omega_L omega - omega0^2 = 0, plus the axial omega0.

    The circular modes are sqrt(omega0^2 + omega_L^2) +/- |omega_L|.
    """
    if omega0 <= 0:
        raise DomainError(f"omega0 = {omega0} must be positive")
    constants = constants or Constants()
    omega_l = abs(constants.larmor_frequency(B))
    root = math.sqrt(omega0 * omega0 + omega_l * omega_l)
    return ZeemanModes(omega_pi=omega0, omega_plus=root + omega_l, omega_minus=root - omega_l)


@dataclass(frozen=True)
class OscillatorSpectrum:
    """Windowed power spectrum of integrated oscillator coordinates."""

    omega: np.ndarray
    power: np.ndarray
    peaks: Tuple[float, ...]

    @property
    def resolution(self) -> float:
        return float(self.omega[1] - self.omega[0])


def zeeman_oscillator_spectrum(
    omega0: float,
    B: float,
    t_max: float = 2000.0,
    n_samples: int = 2 ** 14,
    constants: Optional[Constants] = None,
    threshold: float = 0.05,
) -> OscillatorSpectrum:
    """Integrate m x'' = -m omega0^2 x + (e/c) x' x B and locate its spectral peaks.

    The field points along z; the charge starts displaced along x and z so
    that both circular modes and the axial mode are excited.
    """
    constants = constants or Constants()
    if omega0 <= 0:
        raise DomainError(f"omega0 = {omega0} must be positive")
    cyclotron = constants.e * B / (constants.mu * constants.c)

    def rhs(t, s):
        x, y, z, vx, vy, vz = s
        return [
            vx, vy, vz,
            -omega0 ** 2 * x + cyclotron * vy,
            -omega0 ** 2 * y - cyclotron * vx,
            -omega0 ** 2 * z,
        ]

    times = np.linspace(0.0, t_max, n_samples, endpoint=False)
    sol = integrate.solve_ivp(
        rhs, (0.0, t_max), [1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        method="DOP853", rtol=1e-10, atol=1e-12, t_eval=times,
    )
    if not sol.success:
        raise ConvergenceError(f"oscillator integration failed: {sol.message}")

    window = np.hanning(n_samples)
    dt = times[1] - times[0]
    omega = 2.0 * np.pi * np.fft.rfftfreq(n_samples, d=dt)
    power = sum(np.abs(np.fft.rfft(window * sol.y[i])) ** 2 for i in range(3))
    indices, _ = find_peaks(power, height=threshold * np.max(power))
    logger.debug("oscillator spectrum peaks at %s", omega[indices])
    peaks = tuple(float(w) for w in omega[indices])
    return OscillatorSpectrum(omega=omega, power=power, peaks=peaks)


class PrecessionKind(Enum):
    """Which angular momentum precesses."""
    ORBITAL = "orbital"
    SPIN = "spin"


def larmor_precession_rate(
    B: float, kind: Union[PrecessionKind, str] = PrecessionKind.ORBITAL,
    constants: Optional[Constants] = None,
) -> float:
    """omega_L = e B / (2 mu c) for orbital motion and 2 omega_L for spin."""
    constants = constants or Constants()
    omega_l = constants.larmor_frequency(B)
    return 2.0 * omega_l if PrecessionKind(kind) is PrecessionKind.SPIN else omega_l

