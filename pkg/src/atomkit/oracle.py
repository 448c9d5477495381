"""Independent numerical engines used to check the closed-form results.

The finite-difference radial solver, the sphere and half-line quadratures
and the dipole matrix elements below share no code path with the
analytic formulas in spectra and angular beyond the wavefunctions
themselves.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .angular import spherical_harmonic
from .errors import ConvergenceError, DomainError
from .quadrature import gauss_laguerre, sphere_rule
from .spectra import radial_wavefunction

logger = logging.getLogger(__name__)

AXES = {"x": 0, "y": 1, "z": 2}

StateLabel = Tuple[int, int, int]

# Nonzero angular dipole integrals are of order 0.1 or larger
ANGULAR_ZERO = 1e-14


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid r_i = i h on [0, r_max] with Dirichlet ends."""

    r_max: float
    N: int

    def __post_init__(self):
        if self.N < 2 or self.r_max <= 0:
            raise DomainError(
                f"grid needs N >= 2 and r_max > 0, got N={self.N}, r_max={self.r_max}"
            )

    @classmethod
    def from_spacing(cls, r_max: float, h: float) -> "RadialGrid":
        return cls(r_max=r_max, N=int(round(r_max / h)))

    @property
    def h(self) -> float:
        return self.r_max / self.N

    @property
    def interior(self) -> np.ndarray:
        """The N - 1 points where u is unknown."""
        return self.h * np.arange(1, self.N)

    def refined(self) -> "RadialGrid":
        """Same box with half the spacing."""
        return RadialGrid(r_max=self.r_max, N=2 * self.N)


def effective_potential(r: np.ndarray, l: int) -> np.ndarray:
    """V_eff = -1/r + l(l+1)/(2 r^2)."""
    return -1.0 / r + l * (l + 1) / (2.0 * r * r)


def radial_eigensolve(l: int, k_states: int, grid: RadialGrid) -> List[float]:
    """Lowest eigenvalues of -u''/2 + V_eff u = E u on the grid.

    The three-point Laplacian gives a symmetric tridiagonal matrix whose
    eigenvalues are isolated by Sturm-sequence bisection.

    Raises:
        DomainError: If l < 0 or k_states < 1
        ConvergenceError: If the bisection fails
    """
    if l < 0 or k_states < 1:
        raise DomainError(f"need l >= 0 and k_states >= 1, got l={l}, k_states={k_states}")
    if k_states > grid.N - 1:
        raise DomainError(f"grid with {grid.N - 1} unknowns cannot hold {k_states} states")
    r = grid.interior
    h = grid.h
    diagonal = 1.0 / (h * h) + effective_potential(r, l)
    off_diagonal = np.full(len(r) - 1, -0.5 / (h * h))
    try:
        values = eigh_tridiagonal(
            diagonal,
            off_diagonal,
            eigvals_only=True,
            select="i",
            select_range=(0, k_states - 1),
            lapack_driver="stebz",
        )
    except LinAlgError as e:
        raise ConvergenceError(f"Sturm bisection failed for l={l} on N={grid.N}: {e}") from e
    logger.debug("l=%d N=%d h=%.4g lowest %s", l, grid.N, h, values[:3])
    return [float(v) for v in values]


def default_box(l: int, k_states: int) -> float:
    """r_max = 40 n^2 for the highest requested state n = l + k_states."""
    n_top = l + k_states
    return 40.0 * n_top ** 2


@dataclass(frozen=True)
class RichardsonResult:
    """Grid-extrapolated eigenvalues with the raw values they came from."""

    l: int
    h: float
    values: Tuple[float, ...]
    coarse: Tuple[float, ...]
    fine: Tuple[float, ...]
    order: Optional[Tuple[float, ...]] = None


def richardson_eigenvalues(
    l: int,
    k_states: int,
    h: float = 0.01,
    r_max: Optional[float] = None,
    estimate_order: bool = False,
) -> RichardsonResult:
    """Eigenvalues on spacings h and h/2 combined as (4 E_{h/2} - E_h) / 3.

    With ``estimate_order`` a third solve at h/4 gives the observed
    convergence order log2((E_h - E_{h/2}) / (E_{h/2} - E_{h/4})) per state.
    """
    r_max = default_box(l, k_states) if r_max is None else r_max
    grid = RadialGrid.from_spacing(r_max, h)
    coarse = np.array(radial_eigensolve(l, k_states, grid))
    fine_grid = grid.refined()
    fine = np.array(radial_eigensolve(l, k_states, fine_grid))
    values = (4.0 * fine - coarse) / 3.0

    order = None
    if estimate_order:
        finest = np.array(radial_eigensolve(l, k_states, fine_grid.refined()))
        ratio = (coarse - fine) / (fine - finest)
        order = tuple(float(o) for o in np.log2(np.abs(ratio)))
        logger.debug("l=%d observed order %s", l, order)

    return RichardsonResult(
        l=l, h=grid.h, values=tuple(values.tolist()), coarse=tuple(coarse.tolist()),
        fine=tuple(fine.tolist()), order=order,
    )


@dataclass(frozen=True)
class LevelCluster:
    """Eigenvalues that coincide across l, with their total (l, m) count."""

    energy: float
    ls: Tuple[int, ...]

    @property
    def count(self) -> int:
        return sum(2 * l + 1 for l in self.ls)


def cluster_levels(
    eigenvalues_by_l: Mapping[int, Sequence[float]], tol: float = 1e-6
) -> List[LevelCluster]:
    """Group eigenvalues from different l that agree to relative tolerance tol."""
    pairs = sorted((float(e), l) for l, values in eigenvalues_by_l.items() for e in values)
    clusters: List[List[Tuple[float, int]]] = []
    for energy, l in pairs:
        if clusters and abs(energy - clusters[-1][0][0]) <= tol * abs(clusters[-1][0][0]):
            clusters[-1].append((energy, l))
        else:
            clusters.append([(energy, l)])
    return [
        LevelCluster(energy=float(np.mean([e for e, _ in c])), ls=tuple(sorted(l for _, l in c)))
        for c in clusters
    ]


def sphere_quadrature(f: Callable, l_max: int) -> complex:
    """Integrate f(theta, phi) over the unit sphere, exact up to degree l_max."""
    return sphere_rule(l_max).integrate(f)


def _axis_index(p: Union[str, int]) -> int:
    if isinstance(p, str):
        if p.lower() not in AXES:
            raise DomainError(f"unknown axis {p!r}; use x, y or z")
        return AXES[p.lower()]
    if p not in (0, 1, 2):
        raise DomainError(f"axis index {p} must be 0, 1 or 2")
    return int(p)


def _direction(axis: int) -> Callable:
    if axis == 0:
        return lambda theta, phi: np.sin(theta) * np.cos(phi)
    if axis == 1:
        return lambda theta, phi: np.sin(theta) * np.sin(phi)
    return lambda theta, phi: np.cos(theta)


def radial_dipole_integral(a: Tuple[int, int], b: Tuple[int, int], n_nodes: int) -> float:
    """int R_a R_b r^3 dr with a Gauss-Laguerre rule matched to both decay rates."""
    Ra = radial_wavefunction(*a)
    Rb = radial_wavefunction(*b)
    scale = 1.0 / (1.0 / a[0] + 1.0 / b[0])
    rule = gauss_laguerre(n_nodes, scale=scale)
    return rule.integrate(lambda r: Ra.polynomial_part(r) * Rb.polynomial_part(r) * r ** 3)


def angular_dipole_integral(a: Tuple[int, int], b: Tuple[int, int], axis: int) -> complex:
    """int conj(Y_a) (x^p / r) Y_b over the sphere."""
    Ya = spherical_harmonic(*a)
    Yb = spherical_harmonic(*b)
    direction = _direction(axis)
    return sphere_quadrature(
        lambda theta, phi: np.conj(Ya(theta, phi)) * direction(theta, phi) * Yb(theta, phi),
        a[0] + b[0] + 1,
    )


def dipole_matrix_element(
    a: StateLabel, b: StateLabel, p: Union[str, int], rtol: float = 1e-12
) -> complex:
    """<a| x^p |b> = radial r^3 integral times the angular integral.

    The radial rule is applied at two node counts; disagreement beyond rtol
    means the integrand is not resolved.

    Raises:
        ConvergenceError: If the refined radial quadrature disagrees
    """
    axis = _axis_index(p)
    (na, la, ma), (nb, lb, mb) = a, b
    angular = angular_dipole_integral((la, ma), (lb, mb), axis)
    if abs(angular) < ANGULAR_ZERO:
        return 0j

    Ra = radial_wavefunction(na, la)
    Rb = radial_wavefunction(nb, lb)
    n_nodes = (Ra.degree + Rb.degree + 3) // 2 + 1
    trace = [radial_dipole_integral((na, la), (nb, lb), n_nodes)]
    trace.append(radial_dipole_integral((na, la), (nb, lb), 2 * n_nodes))
    if abs(trace[1] - trace[0]) > rtol * max(1.0, abs(trace[1])):
        raise ConvergenceError(
            f"radial quadrature for {a} -> {b} not converged", [abs(trace[1] - trace[0])]
        )
    return complex(trace[1] * angular)


def dipole_vector(a: StateLabel, b: StateLabel) -> np.ndarray:
    """(x, y, z) components of the dipole matrix element."""
    return np.array([dipole_matrix_element(a, b, axis) for axis in range(3)])


@dataclass(frozen=True)
class LineStrength:
    """Sum over axes of |<upper| x |lower>|^2, with the ratio to the strongest line."""

    upper: StateLabel
    lower: StateLabel
    strength: float
    relative: float


def relative_line_strengths(n_upper: int, n_lower: int, tol: float = 1e-8) -> List[LineStrength]:
    """Relative intensities of the sublevel transitions n_upper -> n_lower.

    Only ratios are returned; absolute intensities need an occupation model.
    """
    if n_upper <= n_lower or n_lower < 1:
        raise DomainError(f"need n_upper > n_lower >= 1, got {n_upper}, {n_lower}")
    raw: Dict[Tuple[StateLabel, StateLabel], float] = {}
    for lu in range(n_upper):
        for mu in range(-lu, lu + 1):
            for ll in range(n_lower):
                for ml in range(-ll, ll + 1):
                    upper, lower = (n_upper, lu, mu), (n_lower, ll, ml)
                    strength = float(np.sum(np.abs(dipole_vector(upper, lower)) ** 2))
                    if strength > tol:
                        raw[(upper, lower)] = strength
    if not raw:
        return []
    peak = max(raw.values())
    return [
        LineStrength(upper=u, lower=lo, strength=s, relative=s / peak)
        for (u, lo), s in sorted(raw.items())
    ]


K_SYMBOL, A_SYMBOL, R_SYMBOL = sp.symbols("K a r", positive=True)


@lru_cache(maxsize=1)
def symbolic_form_factor() -> sp.Expr:
    """Form factor of the hydrogen ground-state density, integrated symbolically.

    F(K) = int 4 pi r^2 rho(r) sin(K r)/(K r) dr with rho = exp(-2r/a)/(pi a^3).
    """
    K, a, r = K_SYMBOL, A_SYMBOL, R_SYMBOL
    density = sp.exp(-2 * r / a) / (sp.pi * a ** 3)
    integrand = 4 * sp.pi * r ** 2 * density * sp.sin(K * r) / (K * r)
    return sp.simplify(sp.integrate(integrand, (r, 0, sp.oo)))


def form_factor_oracle(K: float, a: float = 1.0) -> float:
    """Numerical value of symbolic_form_factor."""
    if K == 0:
        return 1.0
    return float(symbolic_form_factor().subs({K_SYMBOL: K, A_SYMBOL: a}))


def hydrogen_oracle_levels(n_max: int, h: float = 0.01) -> Dict[int, List[float]]:
    """Richardson-refined eigenvalues for every l < n_max, states up to n_max."""
    levels = {}
    for l in range(n_max):
        result = richardson_eigenvalues(l, n_max - l, h=h)
        levels[l] = list(result.values)
    return levels


def relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference) if reference else abs(value)


def max_relative_error(values: Sequence[float], references: Sequence[float]) -> float:
    return max((relative_error(v, r) for v, r in zip(values, references)), default=0.0)


def exact_levels(l: int, k_states: int) -> List[float]:
    """-1/(2n^2) for n = l+1 .. l+k_states."""
    return [-0.5 / n ** 2 for n in range(l + 1, l + k_states + 1)]

