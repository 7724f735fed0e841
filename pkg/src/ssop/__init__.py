"""Spatial secrecy outage probability (SSOP) of exposure-region beamforming.

A uniform linear array steers towards a legitimate receiver while
eavesdroppers form a Poisson point process.  The package evaluates the
exposure region, the fading-averaged SSOP, its closed-form upper bound and a
Monte-Carlo cross-check.
"""
from .array_geometry import (ArrayConfig, array_factor_mag, default_n_terms,
                             pattern_area_approx, pattern_area_exact, pattern_area_numeric,
                             pattern_area_term, q_series, steering_vector)
from .channel_model import (DETERMINISTIC, FadingDraw, SystemParams, c0, capacity_at,
                            equiv_gain_sq, sample_fading, snr_at)
from .errors import (DomainError, NumericalError, ParameterError, SsopError,
                     UnsupportedRegimeError)
from .exposure_region import (PolarPoint, er_area, er_contains, er_radius,
                              reliability_radius)
from .mc_sim import (McConfig, McEstimate, estimate_ssop_fixed_fading, estimate_ssop_mean,
                     sample_ppp)
from .special_functions import (QuadratureSpec, bessel_j0, gauss_hermite_2d,
                                integrate_periodic)
from .ssop_analytics import (SsopResult, evaluate, prob_m_eves, ssop_instant, ssop_mean,
                             ssop_upper, ssop_upper_approx, tightness_ratio)

__version__ = "0.1.0"
