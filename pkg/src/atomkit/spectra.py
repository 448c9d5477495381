"""Hydrogen bound-state spectra.

Energies are in Hartree (atomic units) except for the Dirac levels, which
are returned in units of the rest energy mu c^2.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy import integrate, optimize

from .angular import HalfInt, HalfIntLike, lande_g, validate_pair
from .config import Constants
from .errors import (
    ConvergenceError,
    DomainError,
    ForbiddenTransitionError,
    InternalConsistencyError,
    SupercriticalCouplingError,
)
from .quadrature import gauss_laguerre

logger = logging.getLogger(__name__)

SERIES_NAMES = {1: "Lyman", 2: "Balmer", 3: "Paschen", 4: "Brackett", 5: "Pfund"}

DIRAC_TERMINATION_TOL = 1e-10


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"principal quantum number n = {n} must be an integer >= 1")
    return int(n)


def _check_nlm(n: int, l: int, m: int = 0) -> Tuple[int, int, int]:
    n = _check_n(n)
    if not 0 <= l <= n - 1:
        raise DomainError(f"l = {l} must satisfy 0 <= l <= n - 1 = {n - 1}")
    if abs(m) > l:
        raise DomainError(f"m = {m} must satisfy |m| <= l = {l}")
    return n, int(l), int(m)


@dataclass(frozen=True)
class Level:
    """Stationary hydrogen state with its energy in Hartree."""

    n: int
    l: int = 0
    m: int = 0
    energy: float = float("nan")
    spin_label: Optional[Tuple[HalfInt, ...]] = None

    def __post_init__(self):
        _check_nlm(self.n, self.l, self.m)
        if math.isnan(self.energy):
            object.__setattr__(self, "energy", schrodinger_level(self.n))
        elif self.energy >= 0:
            raise DomainError(f"bound state energy must be negative, got {self.energy}")

    @property
    def label(self) -> str:
        return f"({self.n},{self.l},{self.m})"


class LineKind(Enum):
    """Origin of a spectral line."""
    NORMAL = "normal"
    SIGMA_PLUS = "zeeman_sigma+"
    SIGMA_MINUS = "zeeman_sigma-"
    PI = "zeeman_pi"
    ANOMALOUS = "anomalous"


@dataclass(frozen=True)
class SpectralLine:
    """Line at frequency omega between two levels (Bohr rule, hbar = 1)."""

    omega: float
    upper: Optional[Level] = None
    lower: Optional[Level] = None
    kind: LineKind = LineKind.NORMAL
    delta_m: Optional[int] = None


class ZeemanMode(Enum):
    """Which magnetic interaction is included in zeeman_levels."""
    ORBITAL = "orbital"
    PAULI_PLUS = "pauli+"
    PAULI_MINUS = "pauli-"


@dataclass(frozen=True)
class RadialFunction:
    """R_nl(r) = norm * rho^l * L(rho) * exp(-rho/2) with rho = 2r/n.

    ``coeffs`` holds the unnormalized polynomial L(rho) = sum a_k rho^k with
    a_0 = 1.
    """

    n: int
    l: int
    scale: float
    coeffs: Tuple[float, ...]
    norm: float

    @property
    def degree(self) -> int:
        """Degree of rho^l L(rho)."""
        return self.l + len(self.coeffs) - 1

    def rho(self, r) -> np.ndarray:
        return 2.0 * np.asarray(r, dtype=float) / self.n

    def polynomial_part(self, r) -> np.ndarray:
        """norm * rho^l * L(rho), i.e. R(r) without its exponential factor."""
        rho = self.rho(r)
        return self.norm * rho ** self.l * np.polynomial.polynomial.polyval(rho, self.coeffs)

    def __call__(self, r) -> np.ndarray:
        return self.polynomial_part(r) * np.exp(-self.rho(r) / 2.0)

    def node_count(self) -> int:
        """Number of sign changes of R on r > 0."""
        if len(self.coeffs) == 1:
            return 0
        roots = np.polynomial.polynomial.polyroots(self.coeffs)
        real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots.real))].real
        return int(np.sum(real > 0))


def schrodinger_level(n: int) -> float:
    """E_n = -1/(2 n^2) Hartree."""
    n = _check_n(n)
    return -0.5 / n ** 2


def degeneracy(n: int) -> int:
    """Number of (l, m) states sharing the level n."""
    n = _check_n(n)
    return sum(2 * l + 1 for l in range(n))


def transition_frequency(upper_n: int, lower_n: int) -> float:
    """Bohr frequency omega = E_upper - E_lower."""
    return schrodinger_level(upper_n) - schrodinger_level(lower_n)


def series_limit(m_lower: int) -> float:
    """Accumulation frequency 1/(2 m^2) of the series ending on m_lower."""
    return -schrodinger_level(m_lower)


def series_lines(m_lower: int, n_range: Iterable[int]) -> List[SpectralLine]:
    """Emission lines n -> m_lower, ordered by increasing n.

    Raises:
        DomainError: If some n in the range is not above m_lower
    """
    m_lower = _check_n(m_lower)
    lines = []
    for n in sorted(set(n_range)):
        if n <= m_lower:
            raise DomainError(f"upper level n = {n} must lie above the lower level {m_lower}")
        lines.append(SpectralLine(
            omega=transition_frequency(n, m_lower),
            upper=Level(n),
            lower=Level(m_lower),
        ))
    return lines


def ritz_combination(m: int, n: int, k: int) -> float:
    """Residual of omega_km - (omega_kn + omega_nm) for m < n < k."""
    if not m < n < k:
        raise DomainError(f"need m < n < k, got ({m}, {n}, {k})")
    return transition_frequency(k, m) - (transition_frequency(k, n) + transition_frequency(n, m))


def _laguerre_coefficients(n: int, l: int) -> List[float]:
    coeffs = [1.0]
    for k in range(n - l - 1):
        coeffs.append(coeffs[-1] * (k - (n - 1 - l)) / ((k + 1) * (k + 2 * l + 2)))
    return coeffs


def radial_wavefunction(n: int, l: int) -> RadialFunction:
    """Normalized hydrogen radial function from the power-series recurrence.

    Raises:
        DomainError: If l >= n
    """
    n, l, _ = _check_nlm(n, l)
    coeffs = _laguerre_coefficients(n, l)
    # int R^2 r^2 dr = norm^2 (n/2)^3 sum_ij a_i a_j (2l + 2 + i + j)!
    total = 0.0
    for i, a_i in enumerate(coeffs):
        for j, a_j in enumerate(coeffs):
            total += a_i * a_j * math.factorial(2 * l + 2 + i + j)
    norm = 1.0 / math.sqrt((n / 2.0) ** 3 * total)
    return RadialFunction(n=n, l=l, scale=float(n), coeffs=tuple(coeffs), norm=norm)


def radial_expectation(n: int, l: int, power: float) -> float:
    """<r^power> for the state (n, l) by Gauss-Laguerre quadrature.

    Exact for integer powers; needs power > -(2l + 3) for convergence.
    """
    R = radial_wavefunction(n, l)
    if power <= -(2 * l + 3):
        raise DomainError(f"<r^{power}> diverges for l = {l}")
    degree = 2 * R.degree + 2 + power
    if float(power).is_integer():
        n_nodes = int(degree) // 2 + 2
    else:
        n_nodes = 80
    rule = gauss_laguerre(n_nodes, scale=n / 2.0)
    return rule.integrate(lambda r: R.polynomial_part(r) ** 2 * r ** (2 + power))


def _zeeman_mode(mode: Union[ZeemanMode, str]) -> ZeemanMode:
    if isinstance(mode, ZeemanMode):
        return mode
    try:
        return ZeemanMode(mode)
    except ValueError as e:
        choices = ", ".join(m.value for m in ZeemanMode)
        raise DomainError(f"unknown Zeeman mode {mode!r}; choose from {choices}") from e


def zeeman_levels(
    n: int,
    l: int,
    m: int,
    B: float,
    mode: Union[ZeemanMode, str] = ZeemanMode.ORBITAL,
    constants: Optional[Constants] = None,
) -> float:
    """Level energy in a weak homogeneous magnetic field.

    orbital: E_n + m omega_L; pauli+/-: E_n + m omega_L +/- omega_L, where
    omega_L = e B / (2 mu c) is negative for B > 0.
    """
    _check_nlm(n, l, m)
    constants = constants or Constants()
    mode = _zeeman_mode(mode)
    omega_l = constants.larmor_frequency(B)
    energy = schrodinger_level(n) + m * omega_l
    if mode is ZeemanMode.PAULI_PLUS:
        energy += omega_l
    elif mode is ZeemanMode.PAULI_MINUS:
        energy -= omega_l
    return energy


_DELTA_M_KIND = {0: LineKind.PI, 1: LineKind.SIGMA_PLUS, -1: LineKind.SIGMA_MINUS}


def normal_zeeman_triplet(
    omega0: float, B: float, constants: Optional[Constants] = None
) -> List[SpectralLine]:
    """The three lines omega0 - omega_L * (M - M') for M - M' in {-1, 0, 1}."""
    constants = constants or Constants()
    omega_l = constants.larmor_frequency(B)
    return [
        SpectralLine(omega=omega0 - omega_l * dm, kind=_DELTA_M_KIND[dm], delta_m=dm)
        for dm in (-1, 0, 1)
    ]


def _check_transition(
    upper: Tuple[int, HalfInt, HalfInt], lower: Tuple[int, HalfInt, HalfInt], strict_j_rule: bool
):
    _, J, M = upper
    _, J2, M2 = lower
    if abs(M.twice - M2.twice) > 2:
        raise ForbiddenTransitionError(f"M = {M} -> M' = {M2} changes M by more than 1")
    dj = abs(J.twice - J2.twice)
    if strict_j_rule and dj != 2:
        raise ForbiddenTransitionError(f"J = {J} -> J' = {J2} is not J' = J +/- 1")
    if dj > 2 or (J.twice == 0 and J2.twice == 0):
        raise ForbiddenTransitionError(f"J = {J} -> J' = {J2} is not a dipole transition")


def anomalous_zeeman_lines(
    upper: Tuple[int, HalfIntLike, HalfIntLike],
    lower: Tuple[int, HalfIntLike, HalfIntLike],
    omega0: float,
    B: float,
    constants: Optional[Constants] = None,
    strict_j_rule: bool = True,
    g_upper: Optional[float] = None,
    g_lower: Optional[float] = None,
) -> SpectralLine:
    """Line of the anomalous Zeeman multiplet, omega = omega0 - omega_L (g M - g' M').

    Args:
        upper: (L, J, M) of the upper state
        lower: (L', J', M') of the lower state
        omega0: Field-free line frequency
        B: Field strength (a.u.)
        constants: Physical constants (default alpha)
        strict_j_rule: Only allow J' = J +/- 1; set False to admit Delta J = 0
        g_upper: Override for the upper Lande factor (e.g. 1 in the spinless limit)
        g_lower: Override for the lower Lande factor

    Raises:
        ForbiddenTransitionError: If the selection rules are violated
    """
    constants = constants or Constants()
    L, J, M = upper[0], *validate_pair(upper[1], upper[2])
    L2, J2, M2 = lower[0], *validate_pair(lower[1], lower[2])
    _check_transition((L, J, M), (L2, J2, M2), strict_j_rule)

    g = lande_g(L, J) if g_upper is None else g_upper
    g2 = lande_g(L2, J2) if g_lower is None else g_lower
    omega_l = constants.larmor_frequency(B)
    omega = omega0 - omega_l * (g * M.value - g2 * M2.value)
    dm = (M.twice - M2.twice) // 2
    logger.debug("anomalous line g=%.6g g'=%.6g dM=%d omega=%.12g", g, g2, dm, omega)
    return SpectralLine(omega=omega, kind=LineKind.ANOMALOUS, delta_m=dm)


def _indicial_root(l: int, alpha: float) -> float:
    """delta + 1 = +sqrt((l+1)^2 - alpha^2)."""
    if l < 0:
        raise DomainError(f"l = {l} must be non-negative")
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"alpha = {alpha} must lie in [0, 1)")
    radicand = (l + 1) ** 2 - alpha ** 2
    if radicand <= 0:
        raise SupercriticalCouplingError(l, alpha)
    return math.sqrt(radicand)


def _check_nr(n_r: int) -> int:
    if isinstance(n_r, bool) or int(n_r) != n_r or n_r < 0:
        raise DomainError(f"radial quantum number n_r = {n_r} must be an integer >= 0")
    return int(n_r)


def dirac_level(n_r: int, l: int, alpha: float) -> float:
    """Relativistic level E / (mu c^2) = 1 / sqrt(1 + alpha^2 / (n_r + delta + 1)^2).

    Raises:
        SupercriticalCouplingError: If (l + 1)^2 <= alpha^2
    """
    n_r = _check_nr(n_r)
    effective = n_r + _indicial_root(l, alpha)
    return 1.0 / math.sqrt(1.0 + (alpha / effective) ** 2)


def dirac_level_approx(n_r: int, l: int, alpha: float) -> float:
    """Binomial expansion 1 - alpha^2 / (2 (n_r + delta + 1)^2) of dirac_level."""
    n_r = _check_nr(n_r)
    effective = n_r + _indicial_root(l, alpha)
    return 1.0 - alpha ** 2 / (2.0 * effective ** 2)


def dirac_level_spectroscopic(N: int, j: HalfIntLike, alpha: float) -> float:
    """dirac_level keyed by principal number N = n_r + l + 1 and j = l + 1/2."""
    N = _check_n(N)
    j = HalfInt.of(j)
    if j.is_integer or j.twice < 1:
        raise DomainError(f"j = {j} must be a positive half-odd integer")
    l = (j.twice - 1) // 2
    if N < l + 1:
        raise DomainError(f"N = {N} is too small for j = {j} (needs N >= {l + 1})")
    return dirac_level(N - l - 1, l, alpha)


_SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
_EYE2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class DiracSeries:
    """Two-component coefficients R_0..R_{n_r} of the Dirac radial series.

    Energies and kappa are in units with hbar = c = mu = 1.
    """

    n_r: int
    l: int
    alpha: float
    energy: float
    kappa: float
    delta: float
    coefficients: Tuple[np.ndarray, ...]
    residuals: dict = field(default_factory=dict)

    def energy_matrix(self) -> np.ndarray:
        """M = iE - i sigma_3 + kappa sigma_1."""
        return 1j * self.energy * _EYE2 - 1j * _SIGMA3 + self.kappa * _SIGMA1

    def indicial_matrix(self, k: int) -> np.ndarray:
        """A_k = (k + delta + 1) sigma_1 + i (l + 1) sigma_2 - i alpha."""
        return (
            (k + self.delta + 1) * _SIGMA1
            + 1j * (self.l + 1) * _SIGMA2
            - 1j * self.alpha * _EYE2
        )


def _relative(residual: np.ndarray, scale: float) -> float:
    return float(np.linalg.norm(residual) / scale) if scale > 0 else float(np.linalg.norm(residual))


def dirac_radial_series(n_r: int, l: int, alpha: float) -> DiracSeries:
    """Solve M R_{k-1} = A_k R_k from the indicial kernel vector R_0.

    The series terminates when M R_{n_r} = 0, which holds exactly at the
    energy returned by dirac_level.

    Raises:
        SupercriticalCouplingError: If (l + 1)^2 <= alpha^2
        InternalConsistencyError: If the series does not terminate at n_r
    """
    n_r = _check_nr(n_r)
    delta = _indicial_root(l, alpha) - 1.0
    energy = dirac_level(n_r, l, alpha)
    kappa = math.sqrt(1.0 - energy ** 2)
    series = DiracSeries(
        n_r=n_r, l=l, alpha=alpha, energy=energy, kappa=kappa, delta=delta, coefficients=()
    )
    M = series.energy_matrix()

    r0 = np.array([delta + l + 2, 1j * alpha], dtype=complex)
    r0 /= np.linalg.norm(r0)
    A0 = series.indicial_matrix(0)
    coefficients = [r0]
    recurrence = 0.0
    for k in range(1, n_r + 1):
        rhs = M @ coefficients[-1]
        Ak = series.indicial_matrix(k)
        rk = np.linalg.solve(Ak, rhs)
        recurrence = max(recurrence, _relative(Ak @ rk - rhs, np.linalg.norm(rhs)))
        coefficients.append(rk)

    last = coefficients[-1]
    residuals = {
        "indicial": _relative(A0 @ r0, np.linalg.norm(A0, 2)),
        "recurrence": recurrence,
        "termination": _relative(M @ last, np.linalg.norm(M, 2) * np.linalg.norm(last)),
        "kappa": abs(kappa ** 2 - (1.0 - energy ** 2)),
    }
    logger.debug("dirac series n_r=%d l=%d residuals %s", n_r, l, residuals)
    if residuals["termination"] > DIRAC_TERMINATION_TOL:
        raise InternalConsistencyError(
            f"Dirac series does not terminate at n_r = {n_r}", residuals["termination"]
        )
    return DiracSeries(
        n_r=n_r, l=l, alpha=alpha, energy=energy, kappa=kappa, delta=delta,
        coefficients=tuple(coefficients), residuals=residuals,
    )


def selection_allowed(l: int, m: int, l2: int, m2: int) -> bool:
    """Dipole selection rule: l' = l +/- 1 and m' in {m, m +/- 1}."""
    return abs(l2 - l) == 1 and abs(m2 - m) <= 1


def _turning_points(binding: float, l: int) -> Tuple[float, float]:
    discriminant = 1.0 - 2.0 * l * l * binding
    if abs(discriminant) < 1e-12:
        discriminant = 0.0
    if binding <= 0 or discriminant < 0:
        raise DomainError(f"no turning points for binding energy {binding} at l = {l}")
    root = math.sqrt(discriminant)
    return (1.0 - root) / (2.0 * binding), (1.0 + root) / (2.0 * binding)


def bohr_sommerfeld_action(binding: float, l: int) -> float:
    """Radial action of the closed Coulomb orbit with binding energy |E| and M = l.

    p_r = sqrt(2|E|) sqrt((r_+ - r)(r - r_-)) / r is integrated between the
    turning points with an algebraic-weight quadrature.
    """
    r_minus, r_plus = _turning_points(binding, l)
    prefactor = 2.0 * math.sqrt(2.0 * binding)
    if l == 0:
        # sqrt((r_+ - r) r) / r = r^{-1/2} (r_+ - r)^{1/2}
        value, _ = integrate.quad(
            lambda r: 1.0, 0.0, r_plus, weight="alg", wvar=(-0.5, 0.5), epsabs=1e-13
        )
    elif r_plus - r_minus <= 1e-14 * r_plus:
        return 0.0
    else:
        value, _ = integrate.quad(
            lambda r: 1.0 / r, r_minus, r_plus, weight="alg", wvar=(0.5, 0.5), epsabs=1e-13
        )
    return prefactor * value


def bohr_sommerfeld_level(k: int, l: int, tol: float = 1e-8) -> float:
    """Energy from the quantization of the radial action, 2 pi k.

    Args:
        k: Radial quantum number
        l: Angular momentum M = l
        tol: Absolute tolerance on the action residual

    Returns:
        Total energy -|E| in Hartree

    Raises:
        DomainError: If k + l < 1
        ConvergenceError: If no bracketing energy interval is found
    """
    if k < 0 or l < 0 or k + l < 1:
        raise DomainError(f"(k, l) = ({k}, {l}) needs k, l >= 0 and k + l >= 1")

    target = 2.0 * math.pi * k
    upper = 0.5 / l ** 2 if l > 0 else 1.0

    def residual(binding):
        return bohr_sommerfeld_action(binding, l) - target

    lower = upper * 1e-4
    trace = []
    for _ in range(10):
        trace.append(residual(lower))
        if trace[-1] > 0:
            break
        lower *= 1e-2
    else:
        raise ConvergenceError(f"cannot bracket the action root for (k, l) = ({k}, {l})", trace)

    binding = optimize.bisect(residual, lower, upper, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    final = abs(residual(binding))
    if final > tol * max(1.0, target):
        raise ConvergenceError(f"action residual {final:.3e} above tolerance", trace + [final])
    logger.debug("Bohr-Sommerfeld (k=%d, l=%d): |E| = %.15g", k, l, binding)
    return -binding
