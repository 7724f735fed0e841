"""Spatial secrecy outage probability: instantaneous, averaged, and bounded.

Probabilities are formed as ``-expm1(-x)`` rather than ``1 - exp(-x)``; at
the default parameters they sit near 1e-3 and the subtraction would throw
away three digits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .array_geometry import (ArrayConfig, array_factor_mag, pattern_area_approx,
                             pattern_area_exact)
from .channel_model import SystemParams, c0
from .errors import NumericalError, ParameterError, UnsupportedRegimeError
from .exposure_region import er_area_batch
from .special_functions import QuadratureSpec, angular_grid, gauss_hermite_2d

_OVERSHOOT = 1e-12
# u^beta beyond this contributes e^{-60} to the Rayleigh integral
_RAYLEIGH_CUTOFF = 60.0


@dataclass(frozen=True)
class SsopResult:
    p_mean: float
    p_upper: float
    eta: float
    a0: float
    quadrature_used: QuadratureSpec


def _probability(p: float, what: str) -> float:
    if -_OVERSHOOT <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + _OVERSHOOT:
        return 1.0
    if not 0.0 <= p <= 1.0:
        raise NumericalError(f"{what} = {p!r} lies outside [0, 1]; check the quadrature spec")
    return p


def prob_m_eves(m: int, area: float, eve_density: float) -> float:
    """Poisson probability of exactly ``m`` eavesdroppers inside area ``area``."""
    if int(m) != m or m < 0:
        raise ParameterError(f"m must be a nonnegative integer, got {m!r}")
    if area < 0 or eve_density < 0:
        raise ParameterError("area and eve_density must be nonnegative")
    mu = eve_density * area
    if mu == 0.0:
        return 1.0 if m == 0 else 0.0
    return math.exp(m * math.log(mu) - mu - math.lgamma(m + 1))


def ssop_instant(area: float, eve_density: float) -> float:
    """1 - P(no eavesdropper in the region)."""
    if area < 0 or eve_density < 0:
        raise ParameterError("area and eve_density must be nonnegative")
    return -math.expm1(-eve_density * area)


@lru_cache(maxsize=16)
def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _rayleigh_mean(params: SystemParams, spec: QuadratureSpec) -> float:
    # With t = x^2 + y^2 ~ Exp(1):  p = E[1 - exp(-a t^(2/beta))].
    # Substituting t = u^beta gives the smooth integrand
    # (1 - exp(-a u^2)) beta u^(beta-1) exp(-u^beta) on [0, inf).
    beta = params.pathloss_exp
    a = params.eve_density * math.pi * c0(params) ** (2.0 / beta)
    top = _RAYLEIGH_CUTOFF ** (1.0 / beta)
    x, w = _legendre(max(spec.hermite_nodes, 32))
    u = 0.5 * top * (x + 1.0)
    w = 0.5 * top * w
    f = -np.expm1(-a * u * u) * beta * u ** (beta - 1.0) * np.exp(-u ** beta)
    return float(np.dot(w, f))


def _rician_mean(cfg: ArrayConfig, params: SystemParams, spec: QuadratureSpec) -> float:
    lam = params.eve_density

    def outage(x, y):
        # the area only depends on (x, y^2): evaluate each mirror pair once
        keys = np.stack([x.ravel(), np.abs(y).ravel()], axis=1)
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        area = er_area_batch(cfg, params, uniq[:, 0], uniq[:, 1], spec)
        return -np.expm1(-lam * area)[inverse.ravel()].reshape(x.shape)

    return gauss_hermite_2d(outage, spec)


def ssop_mean(cfg: ArrayConfig, params: SystemParams,
              spec: QuadratureSpec | None = None) -> float:
    """Fading-averaged SSOP, computed by quadrature for each Rician regime."""
    spec = spec or QuadratureSpec()
    lam = params.eve_density
    if lam == 0.0:
        return 0.0
    k = params.rician_k
    if math.isinf(k):
        expo = 2.0 / params.pathloss_exp
        theta, step = angular_grid(spec)
        g2 = array_factor_mag(theta, cfg) ** 2
        area = 0.5 * c0(params) ** expo * step * float(np.sum(g2 ** expo))
        p = -math.expm1(-lam * area)
    elif k == 0.0:
        p = _rayleigh_mean(params, spec)
    else:
        p = _rician_mean(cfg, params, spec)
    return _probability(p, "ssop_mean")


def _upper_from_a0(a0: float, params: SystemParams) -> float:
    lam = params.eve_density
    expo = 2.0 / params.pathloss_exp
    c = c0(params)
    k = params.rician_k
    if math.isinf(k):
        mean_gain = a0 / (2.0 * math.pi)
    else:
        # angular mean of E|h~|^2 = (K G^2 + 1) / (K + 1)
        mean_gain = (k * a0 / (2.0 * math.pi) + 1.0) / (k + 1.0)
    return -math.expm1(-lam * math.pi * (c * mean_gain) ** expo)


def ssop_upper(cfg: ArrayConfig, params: SystemParams) -> float:
    """Closed-form upper bound on the averaged SSOP via the pattern area."""
    return _probability(_upper_from_a0(pattern_area_exact(cfg), params), "ssop_upper")


def ssop_upper_approx(cfg: ArrayConfig, params: SystemParams, n_terms: int) -> float:
    """Upper bound with the pattern area truncated to ``n_terms`` Bessel terms.

    Only defined for the deterministic channel with beta = 2, where the bound
    equals the averaged SSOP.
    """
    if not params.deterministic or params.pathloss_exp != 2.0:
        raise UnsupportedRegimeError(
            "truncated bound is only defined for K = inf and beta = 2")
    a0 = pattern_area_approx(cfg, n_terms)
    return -math.expm1(-0.5 * params.eve_density * c0(params) * a0)


def tightness_ratio(cfg: ArrayConfig, params: SystemParams,
                    spec: QuadratureSpec | None = None) -> float:
    """eta = upper bound / averaged SSOP."""
    mean = ssop_mean(cfg, params, spec)
    if mean <= 0.0:
        raise NumericalError("tightness ratio undefined: averaged SSOP is zero")
    return ssop_upper(cfg, params) / mean


def evaluate(cfg: ArrayConfig, params: SystemParams,
             spec: QuadratureSpec | None = None) -> SsopResult:
    spec = spec or QuadratureSpec()
    mean = ssop_mean(cfg, params, spec)
    upper = ssop_upper(cfg, params)
    eta = upper / mean if mean > 0 else math.nan
    return SsopResult(mean, upper, eta, pattern_area_exact(cfg), spec)
