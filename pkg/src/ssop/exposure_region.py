"""Exposure region: contour D(theta), membership, area and Bob's radius."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .array_geometry import TWO_PI, ArrayConfig, array_factor_mag
from .channel_model import FadingDraw, SystemParams, c0, equiv_gain_sq
from .errors import NumericalError, ParameterError
from .special_functions import QuadratureSpec, angular_grid, integrate_periodic


@dataclass(frozen=True)
class PolarPoint:
    d: float
    theta: float

    def __post_init__(self):
        if not (self.d >= 0 and math.isfinite(self.d)):
            raise ParameterError(f"distance must be finite and >= 0, got {self.d!r}")
        if not math.isfinite(self.theta):
            raise ParameterError(f"theta must be finite, got {self.theta!r}")
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)


def er_radius(theta, cfg: ArrayConfig, params: SystemParams, draw: FadingDraw):
    """D(theta) = (c0 |h~(theta)|^2)^(1/beta), unclamped."""
    h2 = equiv_gain_sq(array_factor_mag(theta, cfg), params, draw)
    out = (c0(params) * np.asarray(h2)) ** (1.0 / params.pathloss_exp)
    return float(out) if out.ndim == 0 else out


def er_contains(z: PolarPoint, cfg: ArrayConfig, params: SystemParams,
                draw: FadingDraw) -> bool:
    # strict: the contour itself is outside
    return bool(z.d < er_radius(z.theta, cfg, params, draw))


def er_area(cfg: ArrayConfig, params: SystemParams, draw: FadingDraw,
            spec: QuadratureSpec | None = None) -> float:
    """Area enclosed by D(theta) for one fading realization, in m^2."""
    spec = spec or QuadratureSpec()
    expo = 2.0 / params.pathloss_exp

    def integrand(theta):
        return equiv_gain_sq(array_factor_mag(theta, cfg), params, draw) ** expo

    return 0.5 * c0(params) ** expo * integrate_periodic(integrand, spec)


def er_area_batch(cfg: ArrayConfig, params: SystemParams, g_re, g_im,
                  spec: QuadratureSpec | None = None) -> np.ndarray:
    """``er_area`` for many draws at once, via the compiled angular kernel.

    For K = inf the area does not depend on the draw and one value is
    broadcast to the batch shape.
    """
    spec = spec or QuadratureSpec()
    g_re = np.asarray(g_re, dtype=np.float64)
    g_im = np.asarray(g_im, dtype=np.float64)
    shape = np.broadcast_shapes(g_re.shape, g_im.shape)
    expo = 2.0 / params.pathloss_exp
    theta, step = angular_grid(spec)
    g = array_factor_mag(theta, cfg)
    scale = 0.5 * c0(params) ** expo * step
    if params.deterministic:
        return np.full(shape, scale * float(np.sum((g * g) ** expo)))
    re = np.broadcast_to(g_re, shape).ravel()
    im_sq = np.broadcast_to(g_im * g_im, shape).ravel()
    sums = kernels.power_sums(g, params.rician_k, re, im_sq, expo)
    area = scale * sums.reshape(shape)
    if not np.all(np.isfinite(area)):
        raise NumericalError("non-finite exposure-region area")
    return area


def reliability_radius(cfg: ArrayConfig, params: SystemParams, draw: FadingDraw) -> float:
    """Largest Bob distance with capacity >= R_B along the steering direction."""
    g_bob = array_factor_mag(cfg.doe_angle, cfg)
    h2 = equiv_gain_sq(g_bob, params, draw)
    den = 2.0 ** params.rate_codeword - 1.0
    return (params.snr_linear * h2 / den) ** (1.0 / params.pathloss_exp)
