"""Dielectric and magnetic response of hydrogen-like matter."""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .config import Constants
from .errors import DomainError, PoleError
from .oracle import dipole_matrix_element
from .spectra import radial_expectation, schrodinger_level

logger = logging.getLogger(__name__)

POLE_RTOL = 1e-12


@dataclass(frozen=True)
class Oscillator:
    """Classical electron oscillator: eigenfrequency, fraction per atom, damping."""

    omega: float
    f: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.f < 0 or self.gamma < 0:
            raise DomainError(f"oscillator needs f >= 0 and gamma >= 0, got f={self.f}, "
                              f"gamma={self.gamma}")


@dataclass(frozen=True)
class OscillatorSet:
    """Oscillators of one atom species and the number density of atoms."""

    oscillators: Tuple[Oscillator, ...]
    density: float = 1.0

    def __post_init__(self):
        if self.density < 0:
            raise DomainError(f"density must be non-negative, got {self.density}")


def _near_pole(omega: float, pole: float) -> bool:
    return abs(abs(omega) - abs(pole)) <= POLE_RTOL * max(abs(pole), 1.0)


def drude_epsilon(omega: float, oscillators: OscillatorSet) -> complex:
    """Drude permittivity 1 + 4 pi n (e^2/m) sum f_k / (omega_k^2 - omega^2 - i omega gamma_k).

    Raises:
        PoleError: If omega hits an undamped eigenfrequency
    """
    total = 0j
    for osc in oscillators.oscillators:
        if osc.gamma == 0 and _near_pole(omega, osc.omega):
            raise PoleError(omega, osc.omega)
        total += osc.f / (osc.omega ** 2 - omega ** 2 - 1j * omega * osc.gamma)
    return 1.0 + 4.0 * np.pi * oscillators.density * total


@dataclass(frozen=True)
class TransitionSet:
    """Ground-state transitions (omega_l, |x_1l|^2) with the truncation tail.

    ``tail_estimate`` is 1 minus the summed oscillator strengths
    2 omega_l |x_1l|^2, i.e. the share carried by the omitted levels and
    the continuum.
    """

    frequencies: Tuple[float, ...]
    strengths: Tuple[float, ...]
    tail_estimate: float = 0.0
    axis: str = "z"

    @property
    def oscillator_strengths(self) -> Tuple[float, ...]:
        return tuple(2.0 * w * x2 for w, x2 in zip(self.frequencies, self.strengths))

    def pairs(self) -> List[Tuple[float, float]]:
        return list(zip(self.frequencies, self.strengths))


def hydrogen_transitions(n_max: int = 10, axis: str = "z") -> TransitionSet:
    """Dipole transitions 1s -> np, n = 2..n_max, from quadrature matrix elements."""
    if n_max < 2:
        raise DomainError(f"n_max = {n_max} must be at least 2")
    frequencies, strengths = [], []
    ground = schrodinger_level(1)
    for n in range(2, n_max + 1):
        x2 = sum(
            abs(dipole_matrix_element((1, 0, 0), (n, 1, m), axis)) ** 2 for m in (-1, 0, 1)
        )
        frequencies.append(schrodinger_level(n) - ground)
        strengths.append(x2)
    transitions = TransitionSet(frequencies=tuple(frequencies), strengths=tuple(strengths))
    tail = 1.0 - sum(transitions.oscillator_strengths)
    logger.debug("hydrogen transitions up to n=%d, sum-rule tail %.4g", n_max, tail)
    return TransitionSet(
        frequencies=tuple(frequencies), strengths=tuple(strengths), tail_estimate=tail, axis=axis
    )


TransitionsLike = Union[TransitionSet, Sequence[Tuple[float, float]]]


def _pairs(transitions: TransitionsLike) -> List[Tuple[float, float]]:
    if isinstance(transitions, TransitionSet):
        return transitions.pairs()
    return [(float(w), float(x2)) for w, x2 in transitions]


def kk_poles(transitions: TransitionsLike) -> List[float]:
    """Pole positions |omega_1l| of the susceptibility, ascending."""
    return sorted(abs(w) for w, _ in _pairs(transitions))


def kk_susceptibility(
    omega: float, transitions: TransitionsLike, density: float = 1.0, printed_sign: bool = False
) -> float:
    """Kramers-Kronig susceptibility 4 n sum omega_l |x_1l|^2 / (omega_l^2 - omega^2).

    Transition frequencies are taken positive (omega_l - omega_1), so the
    static value is positive. ``printed_sign`` uses omega_1 - omega_l
    instead, which flips the overall sign.

    Raises:
        PoleError: If omega coincides with a transition frequency
    """
    total = 0.0
    for w, x2 in _pairs(transitions):
        if _near_pole(omega, w):
            raise PoleError(omega, abs(w))
        w = -abs(w) if printed_sign else abs(w)
        total += w * x2 / (w * w - omega * omega)
    return 4.0 * density * total


def kk_permittivity(
    omega: float, transitions: TransitionsLike, density: float = 1.0, printed_sign: bool = False
) -> float:
    """epsilon = 1 + 4 pi chi_e."""
    return 1.0 + 4.0 * np.pi * kk_susceptibility(omega, transitions, density, printed_sign)


def langevin_chi(
    mean_r2: float, density: float = 1.0, constants: Optional[Constants] = None
) -> float:
    """Diamagnetic susceptibility -n e^2 <r^2> / (6 mu c^2)."""
    if mean_r2 < 0:
        raise DomainError(f"<r^2> = {mean_r2} must be non-negative")
    constants = constants or Constants()
    return -density * constants.e ** 2 * mean_r2 / (6.0 * constants.mu * constants.c ** 2)


def langevin_chi_for_state(
    n: int, l: int, density: float = 1.0, constants: Optional[Constants] = None
) -> float:
    """langevin_chi with <r^2> of the hydrogen state (n, l) from radial quadrature."""
    return langevin_chi(radial_expectation(n, l, 2), density, constants)


def paramagnetic_moment(m: int, constants: Optional[Constants] = None) -> float:
    """Field-axis magnetic moment (e / 2 mu c) m hbar of the state with magnetic number m."""
    if int(m) != m:
        raise DomainError(f"magnetic quantum number m = {m} must be an integer")
    constants = constants or Constants()
    return constants.e * m * constants.hbar / (2.0 * constants.mu * constants.c)


class CombinationLine(NamedTuple):
    """Level pair frequency with its Raman-shifted partners."""

    upper: int
    lower: int
    omega: float
    stokes: float
    anti_stokes: float


def combination_frequencies(
    level_frequencies: Sequence[float], omega: float
) -> List[CombinationLine]:
    """List omega_jj' and omega_jj' -/+ omega for every level pair j > j'."""
    lines = []
    for j, wj in enumerate(level_frequencies):
        for k, wk in enumerate(level_frequencies[:j]):
            base = wj - wk
            lines.append(CombinationLine(j, k, base, base - omega, base + omega))
    return lines
