"""Bessel J0 and the quadrature rules behind the analytic formulas."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalError, ParameterError

__all__ = [
    "QuadratureSpec",
    "bessel_j0",
    "integrate_periodic",
    "gauss_hermite_2d",
    "angular_grid",
    "hermite_rule",
]

# Below this |x| the Maclaurin series is summed directly; its worst
# cancellation (largest term ~4e3 at x=12) still leaves ~1e-12 abs error.
# Above it the Hankel expansion's smallest term is below ~1e-11.
_SERIES_CUTOFF = 12.0


def _hankel_coefficients(count: int) -> tuple[float, ...]:
    # a_k = prod_{m=1..k} (-(2m-1)^2) / (k! 8^k) for order zero
    coeffs = [1.0]
    for k in range(1, count):
        coeffs.append(coeffs[-1] * -((2 * k - 1) ** 2) / (8.0 * k))
    return tuple(coeffs)


_HANKEL_COEFFS = _hankel_coefficients(40)


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts for the periodic angular rule and the Gauss-Hermite rule."""

    angular_nodes: int = 2048
    hermite_nodes: int = 64
    abs_tol: float = 1e-9

    def __post_init__(self):
        if int(self.angular_nodes) != self.angular_nodes or self.angular_nodes < 16 \
                or self.angular_nodes % 2:
            raise ParameterError(
                f"angular_nodes must be an even integer >= 16, got {self.angular_nodes!r}")
        # numpy's Hermite weights underflow to nan somewhere above 370 nodes
        if int(self.hermite_nodes) != self.hermite_nodes or not 8 <= self.hermite_nodes <= 360:
            raise ParameterError(
                f"hermite_nodes must be an integer in [8, 360], got {self.hermite_nodes!r}")
        if not self.abs_tol >= 0:
            raise ParameterError(f"abs_tol must be >= 0, got {self.abs_tol!r}")


def _j0_series(x: float) -> float:
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    m = 0
    while True:
        m += 1
        term *= -q / (m * m)
        total += term
        if abs(term) < 1e-17 * max(1.0, abs(total)) and m > q:
            return total


def _j0_hankel(x: float) -> float:
    # J0(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4,
    # P = sum (-1)^k a_{2k} / x^{2k}, Q = sum (-1)^k a_{2k+1} / x^{2k+1}
    p = 0.0
    q = 0.0
    prev = math.inf
    inv = 1.0 / x
    power = 1.0
    for k, a in enumerate(_HANKEL_COEFFS):
        term = a * power
        if abs(term) > prev:
            break  # asymptotic series started diverging
        prev = abs(term)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * term
        else:
            q += sign * term
        if prev < 1e-17:
            break
        power *= inv
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, order zero.

    Absolute error is below 1e-11 on |x| <= 200.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"bessel_j0 needs a finite argument, got {x!r}")
    x = abs(x)
    if x < _SERIES_CUTOFF:
        return _j0_series(x)
    return _j0_hankel(x)


@lru_cache(maxsize=32)
def _angles(n: int) -> np.ndarray:
    grid = 2.0 * np.pi * np.arange(n) / n
    grid.setflags(write=False)
    return grid


def angular_grid(spec: QuadratureSpec) -> tuple[np.ndarray, float]:
    """Uniform samples on [0, 2 pi) and the matching step."""
    n = spec.angular_nodes
    return _angles(n), 2.0 * np.pi / n


@lru_cache(maxsize=32)
def _hermite(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.hermite.hermgauss(n)
    weights = weights / math.sqrt(math.pi)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def hermite_rule(spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes and weights normalized for the density e^{-x^2}/sqrt(pi)."""
    return _hermite(spec.hermite_nodes)


def integrate_periodic(f, spec: QuadratureSpec) -> float:
    """Integrate a 2 pi-periodic function over one period.

    ``f`` is called once with the full array of sample angles and may return
    an array of the same shape or a scalar.  The rectangle rule used here is
    exact for trigonometric polynomials of degree < angular_nodes / 2.
    """
    theta, step = angular_grid(spec)
    values = np.broadcast_to(np.asarray(f(theta), dtype=np.float64), theta.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericalError(
            f"integrand is {values[i]!r} at theta={theta[i]!r}")
    return float(values.sum() * step)


def gauss_hermite_2d(g, spec: QuadratureSpec) -> float:
    """Approximate E[g(X, Y)] for independent X, Y ~ N(0, 1/2).

    That is the double integral of g(x, y) exp(-(x^2 + y^2)) / pi.  ``g`` is
    called once with two (n, n) node arrays.
    """
    nodes, weights = hermite_rule(spec)
    x, y = np.meshgrid(nodes, nodes, indexing="ij")
    values = np.broadcast_to(np.asarray(g(x, y), dtype=np.float64), x.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
        raise NumericalError(
            f"integrand is {values[i, j]!r} at node (x={x[i, j]!r}, y={y[i, j]!r})")
    return float(weights @ values @ weights)
