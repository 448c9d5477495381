"""Quadrature rules on intervals, the half-line and the unit sphere."""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Tuple

import numpy as np


class QuadratureDomain(Enum):
    """Domain a rule integrates over."""
    INTERVAL = "interval"
    HALF_LINE = "half-line"
    SPHERE = "sphere"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights with the polynomial degree integrated exactly.

    For sphere rules ``nodes`` has shape (2, n) holding (theta, phi) pairs.
    For half-line rules the weight function exp(-r/scale) is already folded
    into ``weights``, so ``integrate`` expects the bare polynomial factor.
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain: QuadratureDomain
    degree: int

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def integrate(self, f) -> complex:
        """Apply the rule to a vectorized integrand."""
        if self.domain is QuadratureDomain.SPHERE:
            values = f(self.nodes[0], self.nodes[1])
        else:
            values = f(self.nodes)
        total = np.sum(self.weights * values)
        return total if np.iscomplexobj(total) else float(total)


@lru_cache(maxsize=64)
def _leggauss(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=64)
def _laggauss(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.laguerre.laggauss(n)


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """Gauss-Legendre rule on [a, b], exact for degree 2n - 1."""
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return QuadratureRule(
        nodes=half * x + 0.5 * (a + b),
        weights=half * w,
        domain=QuadratureDomain.INTERVAL,
        degree=2 * n - 1,
    )


def gauss_laguerre(n: int, scale: float = 1.0) -> QuadratureRule:
    """Gauss-Laguerre rule for integrals of p(r) exp(-r/scale) over r > 0.

    Exact when p is a polynomial of degree at most 2n - 1.
    """
    x, w = _laggauss(n)
    return QuadratureRule(
        nodes=scale * x,
        weights=scale * w,
        domain=QuadratureDomain.HALF_LINE,
        degree=2 * n - 1,
    )


def sphere_rule(l_max: int) -> QuadratureRule:
    """Product rule: Gauss-Legendre in cos(theta) times uniform in phi.

    Integrates every spherical polynomial of degree <= l_max exactly,
    i.e. all products of harmonics whose degrees add up to l_max.
    """
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    n_theta = l_max // 2 + 1
    n_phi = l_max + 1
    x, w = _leggauss(n_theta)
    theta = np.arccos(x)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.outer(w, np.full(n_phi, 2.0 * np.pi / n_phi))
    return QuadratureRule(
        nodes=np.vstack([tt.ravel(), pp.ravel()]),
        weights=ww.ravel(),
        domain=QuadratureDomain.SPHERE,
        degree=l_max,
    )
