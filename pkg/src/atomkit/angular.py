"""Exact angular-momentum algebra.

Half-integer quantum numbers are stored doubled, so every comparison and
parity check is integer arithmetic; floating point only enters at matrix
entries. Matrices use the canonical ascending basis e_{-J}, ..., e_{J}.

Phase convention for spherical harmonics: F_l^m(theta) is real and
F_l^{-l} is a positive multiple of sin^l(theta). Raising with the positive
ladder coefficients then reproduces the Condon-Shortley signs exactly, so
the two conventions agree for every (l, m).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from scipy.linalg import expm

from .errors import DomainError, EmptySubspaceError
from .quadrature import sphere_rule

logger = logging.getLogger(__name__)

HalfIntLike = Union["HalfInt", int, float, str, Fraction, sp.Rational]


@dataclass(frozen=True, order=True)
class HalfInt:
    """Half-integer quantum number stored as the integer 2*value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, (int, np.integer)) or isinstance(self.twice, bool):
            raise DomainError(f"HalfInt needs an integer doubled value, got {self.twice!r}")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def of(cls, value: HalfIntLike) -> "HalfInt":
        """Build from an int, float, Fraction, sympy Rational or a string like '3/2'."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        elif isinstance(value, sp.Rational):
            value = Fraction(int(value.p), int(value.q))
        elif isinstance(value, float):
            doubled = 2.0 * value
            if doubled != round(doubled):
                raise DomainError(f"{value!r} is not a half-integer")
            return cls(int(round(doubled)))
        doubled = 2 * Fraction(value)
        if doubled.denominator != 1:
            raise DomainError(f"{value!r} is not a half-integer")
        return cls(int(doubled))

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def as_rational(self) -> sp.Rational:
        """Exact sympy value."""
        return sp.Rational(self.twice, 2)

    def __float__(self) -> float:
        return self.value

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __add__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice + HalfInt.of(other).twice)

    def __sub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def half_int(value: HalfIntLike) -> HalfInt:
    """Shorthand for HalfInt.of."""
    return HalfInt.of(value)


def validate_pair(J: HalfIntLike, M: HalfIntLike) -> Tuple[HalfInt, HalfInt]:
    """Check 2J >= 0, |M| <= J and 2J - 2M even.

    Raises:
        DomainError: If the pair is not a valid (J, M) label
    """
    J, M = HalfInt.of(J), HalfInt.of(M)
    if J.twice < 0:
        raise DomainError(f"J = {J} must be non-negative")
    if abs(M.twice) > J.twice or (J.twice - M.twice) % 2:
        raise DomainError(f"(J, M) = ({J}, {M}) is not a valid quantum-number pair")
    return J, M


def ladder_coefficients(J: HalfIntLike, m: HalfIntLike) -> Tuple[float, float]:
    """Coefficients of H_+ e_m = s_plus e_{m+1} and H_- e_m = s_minus e_{m-1}.

    Args:
        J: Spin number
        m: Eigenvalue of H_3

    Returns:
        (s_plus, s_minus) = (sqrt((J-m)(J+m+1)), sqrt((J+m)(J-m+1)))
    """
    J, m = validate_pair(J, m)
    tj, tm = J.twice, m.twice
    # (J - m)(J + m + 1) = (2J - 2m)(2J + 2m + 2) / 4
    s_plus = np.sqrt((tj - tm) * (tj + tm + 2)) / 2.0
    s_minus = np.sqrt((tj + tm) * (tj - tm + 2)) / 2.0
    return float(s_plus), float(s_minus)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class AngularRep:
    """Hermitian generators H1, H2, H3 of the spin-J representation."""

    J: HalfInt
    h1: np.ndarray
    h2: np.ndarray
    h3: np.ndarray

    @property
    def dim(self) -> int:
        return self.J.twice + 1

    @property
    def generators(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.h1, self.h2, self.h3

    @property
    def raising(self) -> np.ndarray:
        return self.h1 + 1j * self.h2

    @property
    def lowering(self) -> np.ndarray:
        return self.h1 - 1j * self.h2

    def basis_index(self, m: HalfIntLike) -> int:
        """Position of e_m in the ascending basis."""
        _, m = validate_pair(self.J, m)
        return (m.twice + self.J.twice) // 2

    def casimir(self) -> np.ndarray:
        return self.h1 @ self.h1 + self.h2 @ self.h2 + self.h3 @ self.h3

    def commutator_residual(self) -> float:
        """Largest elementwise deviation from [H1,H2] = iH3 and its cyclic versions."""
        h = self.generators
        worst = 0.0
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            comm = h[a] @ h[b] - h[b] @ h[a]
            worst = max(worst, float(np.max(np.abs(comm - 1j * h[c]))))
        return worst

    def casimir_residual(self) -> float:
        """Largest elementwise deviation from H^2 = J(J+1) I."""
        j = self.J.value
        return float(np.max(np.abs(self.casimir() - j * (j + 1) * np.eye(self.dim))))

    def hermiticity_residual(self) -> float:
        return max(float(np.max(np.abs(h - h.conj().T))) for h in self.generators)


@lru_cache(maxsize=32)
def spin_representation(J: HalfIntLike) -> AngularRep:
    """Matrices of the irreducible spin-J representation.

    For J = 1/2 these are the Pauli matrices over two, written in the
    ascending basis (e_{-1/2}, e_{1/2}); reversing the basis order gives
    sigma_k / 2 in the usual layout.
    """
    J = HalfInt.of(J)
    if J.twice < 0:
        raise DomainError(f"J = {J} must be non-negative")
    dim = J.twice + 1
    ms = [HalfInt(t) for t in range(-J.twice, J.twice + 1, 2)]
    raising = np.zeros((dim, dim), dtype=complex)
    for i, m in enumerate(ms[:-1]):
        raising[i + 1, i] = ladder_coefficients(J, m)[0]
    lowering = raising.conj().T
    h1 = 0.5 * (raising + lowering)
    h2 = -0.5j * (raising - lowering)
    h3 = np.diag([m.value for m in ms]).astype(complex)
    return AngularRep(J=J, h1=_frozen(h1), h2=_frozen(h2), h3=_frozen(h3))


def spin_rotation(J: HalfIntLike, theta: float, axis: Sequence[float]) -> np.ndarray:
    """Rotation exp(i theta n.H) in the spin-J representation."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    rep = spin_representation(J)
    generator = n[0] * rep.h1 + n[1] * rep.h2 + n[2] * rep.h3
    return expm(1j * theta * generator)


def _normalized_legendre(l: int, m: int, x: np.ndarray) -> np.ndarray:
    """Unit-sphere-normalized associated Legendre function with Condon-Shortley sign."""
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    pmm = np.full_like(x, 1.0 / np.sqrt(4.0 * np.pi))
    for k in range(1, m + 1):
        pmm = -np.sqrt((2 * k + 1) / (2.0 * k)) * s * pmm
    if l == m:
        return pmm
    p = np.sqrt(2 * m + 3.0) * x * pmm
    p_prev = pmm
    for ll in range(m + 2, l + 1):
        a = np.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
        b = np.sqrt(((ll - 1.0) ** 2 - m * m) / (4.0 * (ll - 1.0) ** 2 - 1.0))
        p_prev, p = p, a * (x * p - b * p_prev)
    return p


@dataclass(frozen=True)
class SphericalHarmonic:
    """Orthonormal spherical harmonic Y_l^m(theta, phi) = F_l^m(theta) e^{i m phi}."""

    l: int
    m: int

    def polar_factor(self, theta) -> np.ndarray:
        """The real function F_l^m(theta)."""
        ma = abs(self.m)
        p = _normalized_legendre(self.l, ma, np.cos(theta))
        if self.m < 0 and ma % 2:
            p = -p
        return p

    def __call__(self, theta, phi) -> np.ndarray:
        return self.polar_factor(theta) * np.exp(1j * self.m * np.asarray(phi, dtype=float))


def spherical_harmonic(l: int, m: int) -> SphericalHarmonic:
    """Evaluator for Y_l^m built by the stable associated-Legendre recurrence.

    Raises:
        DomainError: If l < 0 or |m| > l
    """
    if l < 0 or abs(m) > l:
        raise DomainError(f"(l, m) = ({l}, {m}) needs 0 <= l and |m| <= l")
    return SphericalHarmonic(int(l), int(m))


def angular_laplacian(f: Callable, theta, phi, step: float = 1e-4) -> np.ndarray:
    """Central-difference evaluation of Lambda f on the sphere."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    h = step
    f0 = f(theta, phi)
    d_theta = (f(theta + h, phi) - f(theta - h, phi)) / (2 * h)
    d2_theta = (f(theta + h, phi) - 2 * f0 + f(theta - h, phi)) / h ** 2
    d2_phi = (f(theta, phi + h) - 2 * f0 + f(theta, phi - h)) / h ** 2
    sin = np.sin(theta)
    return d2_theta + np.cos(theta) / sin * d_theta + d2_phi / sin ** 2


@dataclass(frozen=True)
class LadderHarmonic:
    """Harmonic obtained symbolically by raising sin^l(theta) e^{-i l phi}."""

    l: int
    m: int
    expression: sp.Expr
    norm: float
    evaluator: Callable

    def __call__(self, theta, phi) -> np.ndarray:
        values = self.evaluator(np.asarray(theta, float), np.asarray(phi, float))
        return np.broadcast_to(values, np.broadcast(theta, phi).shape) / self.norm


_THETA, _PHI = sp.symbols("theta phi", real=True)


@lru_cache(maxsize=32)
def ladder_harmonic(l: int, m: int) -> LadderHarmonic:
    """Build Y_l^m by (l + m) applications of L_+ = e^{i phi}(d_theta + i cot(theta) d_phi).

    Symbolic and slow; intended as an oracle for small l.
    """
    if l < 0 or abs(m) > l:
        raise DomainError(f"(l, m) = ({l}, {m}) needs 0 <= l and |m| <= l")
    expr = sp.sin(_THETA) ** l * sp.exp(-sp.I * l * _PHI)
    for _ in range(l + m):
        expr = sp.exp(sp.I * _PHI) * (
            sp.diff(expr, _THETA) + sp.I * sp.cot(_THETA) * sp.diff(expr, _PHI)
        )
        expr = sp.simplify(expr)
    evaluator = sp.lambdify((_THETA, _PHI), expr, modules="numpy")
    rule = sphere_rule(2 * l + 2)

    def density(theta, phi):
        values = np.broadcast_to(evaluator(theta, phi), theta.shape)
        return np.abs(values) ** 2

    norm = float(np.sqrt(rule.integrate(density)))
    logger.debug("ladder harmonic (%d, %d) norm %.6g", l, m, norm)
    return LadderHarmonic(l=l, m=m, expression=expr, norm=norm, evaluator=evaluator)


def _check_coupling(l: int, j: HalfInt) -> int:
    """Return +1 or -1 for the branch j = l +/- 1/2."""
    if l < 0:
        raise DomainError(f"l = {l} must be non-negative")
    if j.twice == 2 * l + 1:
        return 1
    if j.twice == 2 * l - 1:
        if l == 0:
            raise EmptySubspaceError(l)
        return -1
    if l == 0 and j.twice == -1:
        raise EmptySubspaceError(l)
    raise DomainError(f"j = {j} is not l +/- 1/2 for l = {l}")


@dataclass(frozen=True)
class SpinorHarmonic:
    """Eigenfunction of J^2 and J_3 in the space D(l) (x) C^2.

    ``coefficients`` maps (m, 2*s) with s = +1/2 (up) or -1/2 (down) to the
    weight of Y_l^m (x) spin state.
    """

    l: int
    j: HalfInt
    k: HalfInt
    branch: int
    coefficients: Tuple[Tuple[Tuple[int, int], float], ...]

    def vector(self) -> np.ndarray:
        """Coefficients in the product basis index 2*(m + l) + (0 down, 1 up)."""
        v = np.zeros(2 * (2 * self.l + 1), dtype=complex)
        for (m, two_s), c in self.coefficients:
            v[2 * (m + self.l) + (1 if two_s > 0 else 0)] = c
        return v

    def __call__(self, theta, phi) -> np.ndarray:
        """Two-component value (up, down) at (theta, phi)."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros((2,) + np.broadcast(theta, phi).shape, dtype=complex)
        for (m, two_s), c in self.coefficients:
            out[0 if two_s > 0 else 1] += c * spherical_harmonic(self.l, m)(theta, phi)
        return out

    def norm(self) -> float:
        return float(np.sqrt(sum(c * c for _, c in self.coefficients)))


def couple_l_half(l: int, j: HalfIntLike, k: HalfIntLike) -> SpinorHarmonic:
    """Spinor spherical harmonic with total angular momentum j and J_3 = k.

    The state is normalized with a positive coefficient on the orbital
    component of largest |m|.

    Raises:
        EmptySubspaceError: For the j = l - 1/2 branch at l = 0
        DomainError: If j is not l +/- 1/2 or |k| > j
    """
    j = HalfInt.of(j)
    branch = _check_coupling(l, j)
    j, k = validate_pair(j, k)

    tk = k.twice
    denominator = 2.0 * (2 * l + 1)
    plus = np.sqrt((2 * l + tk + 1) / denominator)
    minus = np.sqrt((2 * l - tk + 1) / denominator)
    m_up, m_down = (tk - 1) // 2, (tk + 1) // 2
    if branch > 0:
        c_up, c_down = plus, minus
    else:
        c_up, c_down = -minus, plus

    terms = []
    if abs(m_up) <= l and c_up != 0.0:
        terms.append(((m_up, 1), float(c_up)))
    if abs(m_down) <= l and c_down != 0.0:
        terms.append(((m_down, -1), float(c_down)))

    leading = max(terms, key=lambda term: abs(term[0][0]))
    if leading[1] < 0:
        terms = [(key, -c) for key, c in terms]
    return SpinorHarmonic(l=l, j=j, k=k, branch=branch, coefficients=tuple(terms))


def spinor_basis(l: int) -> List[SpinorHarmonic]:
    """All 2(2l + 1) coupled states for one orbital number l."""
    states = []
    for tj in (2 * l + 1, 2 * l - 1):
        if tj < 0:
            continue
        for tk in range(-tj, tj + 1, 2):
            states.append(couple_l_half(l, HalfInt(tj), HalfInt(tk)))
    return states


@dataclass(frozen=True)
class CoupledOperators:
    """Total angular momentum and sigma.L on D(l) (x) C^2."""

    j1: np.ndarray
    j2: np.ndarray
    j3: np.ndarray
    j_squared: np.ndarray
    sigma_dot_l: np.ndarray


@lru_cache(maxsize=16)
def orbital_spin_operators(l: int) -> CoupledOperators:
    """Block operators J_k = L_k (x) 1 + 1 (x) S_k and sigma.L in the product basis."""
    orbital = spin_representation(HalfInt(2 * l))
    spin = spin_representation(HalfInt(1))
    eye_l = np.eye(orbital.dim)
    eye_s = np.eye(2)
    total = [
        np.kron(L, eye_s) + np.kron(eye_l, S)
        for L, S in zip(orbital.generators, spin.generators)
    ]
    sigma_dot_l = sum(np.kron(L, 2.0 * S) for L, S in zip(orbital.generators, spin.generators))
    j_squared = sum(Jk @ Jk for Jk in total)
    return CoupledOperators(
        j1=total[0], j2=total[1], j3=total[2], j_squared=j_squared, sigma_dot_l=sigma_dot_l
    )


def _check_lande(L: int, J: HalfIntLike) -> HalfInt:
    J = HalfInt.of(J)
    if J.twice == 0:
        raise DomainError("Lande factor undefined for J = 0 (division by zero)")
    if L < 0 or abs(J.twice - 2 * L) != 1:
        raise DomainError(f"J = {J} is not L +/- 1/2 for L = {L}")
    return J


def lande_g(L: int, J: HalfIntLike, exact: bool = False) -> Union[float, sp.Rational]:
    """Lande factor g = 3/2 + (3/4 - L(L+1)) / (2 J(J+1)).

    Args:
        L: Orbital quantum number
        J: Total angular momentum, L +/- 1/2
        exact: Return a sympy Rational instead of a float
    """
    J = _check_lande(L, J)
    j = J.as_rational()
    g = sp.Rational(3, 2) + (sp.Rational(3, 4) - L * (L + 1)) / (2 * j * (j + 1))
    return g if exact else float(g)


def vector_model_g(L: int, J: HalfIntLike, exact: bool = False) -> Union[float, sp.Rational]:
    """Effective gyromagnetic ratio of the classical vector model.

    The orbital moment (ratio 1) and the spin moment (ratio 2) are projected
    on the precessing total angular momentum.
    """
    J = _check_lande(L, J)
    j2 = J.as_rational() * (J.as_rational() + 1)
    l2 = sp.Integer(L * (L + 1))
    s2 = sp.Rational(3, 4)
    g = (j2 + l2 - s2) / (2 * j2) + 2 * (j2 + s2 - l2) / (2 * j2)
    return g if exact else float(g)
