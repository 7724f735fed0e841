"""Uniform linear array: steering vector, array-factor magnitude, pattern area.

All angles are radians.  Spacing is expressed in wavelengths, so the
phase step k * delta_d equals 2 pi * spacing_wavelengths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .special_functions import QuadratureSpec, bessel_j0, integrate_periodic

TWO_PI = 2.0 * math.pi

# below this |sin(psi/2)| the Dirichlet ratio is replaced by the direct sum
_SINGULAR_EPS = 1e-9


@dataclass(frozen=True)
class ArrayConfig:
    """ULA geometry steered towards the direction of emission ``doe_angle``."""

    n_elements: int = 8
    spacing_wavelengths: float = 0.5
    doe_angle: float = 0.0

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ParameterError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        if not self.spacing_wavelengths > 0 or not math.isfinite(self.spacing_wavelengths):
            raise ParameterError(
                f"spacing_wavelengths must be positive, got {self.spacing_wavelengths!r}")
        if not math.isfinite(self.doe_angle):
            raise ParameterError(f"doe_angle must be finite, got {self.doe_angle!r}")
        object.__setattr__(self, "n_elements", int(self.n_elements))
        object.__setattr__(self, "doe_angle", float(self.doe_angle) % TWO_PI)

    @property
    def phase_step(self) -> float:
        """k * delta_d in radians."""
        return TWO_PI * self.spacing_wavelengths


def steering_vector(theta: float, cfg: ArrayConfig) -> np.ndarray:
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta!r}")
    i = np.arange(cfg.n_elements)
    return np.exp(-1j * cfg.phase_step * math.sin(theta) * i)


def array_factor_mag(theta, cfg: ArrayConfig):
    """|G(theta, theta_B)| for scalar or array ``theta``; range [0, sqrt(N)]."""
    theta = np.asarray(theta, dtype=np.float64)
    if not np.all(np.isfinite(theta)):
        raise DomainError("theta must be finite")
    n = cfg.n_elements
    psi = cfg.phase_step * (math.sin(cfg.doe_angle) - np.sin(theta))
    half = 0.5 * psi
    den = np.sin(half)
    singular = np.abs(den) < _SINGULAR_EPS
    safe = np.where(singular, 1.0, den)
    mag = np.abs(np.sin(n * half) / safe)
    if np.any(singular):
        i = np.arange(n)
        direct = np.abs(np.exp(1j * np.multiply.outer(psi[singular], i)).sum(axis=-1))
        mag = np.where(singular, 0.0, mag)
        mag[singular] = direct
    mag = np.minimum(mag / math.sqrt(n), math.sqrt(n))
    return float(mag) if mag.ndim == 0 else mag


def q_series(n: int, cfg: ArrayConfig) -> float:
    """J0(k d n) cos(k d n sin theta_B)."""
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    arg = cfg.phase_step * n
    return bessel_j0(arg) * math.cos(arg * math.sin(cfg.doe_angle))


def pattern_area_term(n: int, cfg: ArrayConfig) -> float:
    """The n-th summand of the Bessel series for the pattern area."""
    N = cfg.n_elements
    if int(n) != n or not 1 <= n <= N - 1:
        raise ParameterError(f"term index must lie in [1, {N - 1}], got {n!r}")
    return 4.0 * math.pi * (N - n) / N * q_series(n, cfg)


def pattern_area_approx(cfg: ArrayConfig, n_terms: int) -> float:
    """2 pi plus the first ``n_terms`` summands (clamped to N - 1)."""
    if int(n_terms) != n_terms or n_terms < 1:
        raise ParameterError(f"n_terms must be a positive integer, got {n_terms!r}")
    top = min(int(n_terms), cfg.n_elements - 1)
    return TWO_PI + math.fsum(pattern_area_term(n, cfg) for n in range(1, top + 1))


def pattern_area_exact(cfg: ArrayConfig) -> float:
    """Closed-form integral of |G|^2 over a full turn."""
    if cfg.n_elements == 1:
        return TWO_PI
    return pattern_area_approx(cfg, cfg.n_elements - 1)


def pattern_area_numeric(cfg: ArrayConfig, spec: QuadratureSpec | None = None) -> float:
    spec = spec or QuadratureSpec()
    return integrate_periodic(lambda t: array_factor_mag(t, cfg) ** 2, spec)


def default_n_terms(cfg: ArrayConfig, threshold: float = 1e-3) -> int:
    """Truncation point N_up: smallest n with |q_m| < threshold for all n < m < N.

    A single small q_n is not enough (at theta_B = 30 deg every odd q_n is
    zero), so the whole remaining tail has to be negligible.  Never below 1.
    """
    top = cfg.n_elements - 1
    n_up = top
    for m in range(top, 0, -1):
        if abs(q_series(m, cfg)) >= threshold:
            break
        n_up = m - 1
    return max(1, n_up)
