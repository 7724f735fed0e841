"""Monte-Carlo validation of the SSOP.

Random streams are split into fixed-size blocks, block ``b`` drawing from
``default_rng([root_seed, b])``.  Results therefore do not depend on how the
blocks are scheduled, and a fixed seed reproduces estimates bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .array_geometry import ArrayConfig, array_factor_mag
from .channel_model import FadingDraw, SystemParams, c0, sample_fading_batch
from .errors import ParameterError
from .exposure_region import PolarPoint, er_area_batch
from .kernels import gain_sq
from .special_functions import QuadratureSpec, angular_grid

_BLOCK = 4096
# bounding disc is inflated over the sampled maximum of D(theta)
_RADIUS_MARGIN = 1.01
# below this many outage events the normal interval is replaced by Wilson's
_WILSON_EVENTS = 10


@dataclass(frozen=True)
class McConfig:
    n_fading_draws: int = 10_000
    n_ppp_trials_per_draw: int = 1
    root_seed: int = 0
    confidence: float = 0.99

    def __post_init__(self):
        if int(self.n_fading_draws) != self.n_fading_draws or self.n_fading_draws < 1:
            raise ParameterError("n_fading_draws must be a positive integer")
        if int(self.n_ppp_trials_per_draw) != self.n_ppp_trials_per_draw \
                or self.n_ppp_trials_per_draw < 1:
            raise ParameterError("n_ppp_trials_per_draw must be a positive integer")
        if int(self.root_seed) != self.root_seed or self.root_seed < 0:
            raise ParameterError("root_seed must be an unsigned integer")
        if not 0.0 < self.confidence < 1.0:
            raise ParameterError("confidence must lie in (0, 1)")


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    ci_low: float
    ci_high: float
    n_samples: int

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.ci_low - slack <= value <= self.ci_high + slack


def _z(confidence: float) -> float:
    return NormalDist().inv_cdf(0.5 + 0.5 * confidence)


def _mean_interval(samples: np.ndarray, confidence: float) -> McEstimate:
    n = samples.size
    p = float(samples.mean())
    sd = float(samples.std(ddof=1)) if n > 1 else 0.0
    half = _z(confidence) * sd / math.sqrt(n)
    return McEstimate(p, max(0.0, p - half), min(1.0, p + half), n)


def _binomial_interval(events: int, n: int, confidence: float) -> McEstimate:
    p = events / n
    z = _z(confidence)
    if events < _WILSON_EVENTS or n - events < _WILSON_EVENTS:
        z2 = z * z
        centre = (p + z2 / (2 * n)) / (1 + z2 / n)
        half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n)
        lo, hi = centre - half, centre + half
    else:
        half = z * math.sqrt(p * (1 - p) / n)
        lo, hi = p - half, p + half
    return McEstimate(p, max(0.0, min(lo, p)), min(1.0, max(hi, p)), n)


def _block_rng(root_seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng([root_seed, block])


def _ppp_arrays(eve_density, radius, rng, size):
    """Counts per trial plus the flat polar coordinates of every point."""
    radius = np.broadcast_to(np.asarray(radius, dtype=np.float64), size)
    counts = rng.poisson(eve_density * math.pi * radius * radius)
    total = int(counts.sum())
    owner = np.repeat(np.arange(counts.size), counts.ravel())
    d = radius.ravel()[owner] * np.sqrt(rng.random(total))
    theta = 2.0 * math.pi * rng.random(total)
    return counts, owner, d, theta


def sample_ppp(eve_density: float, radius: float, rng: np.random.Generator) -> list[PolarPoint]:
    """Homogeneous PPP restricted to the disc of the given radius."""
    if eve_density < 0:
        raise ParameterError("eve_density must be nonnegative")
    if not radius > 0:
        raise ParameterError("radius must be positive")
    _, _, d, theta = _ppp_arrays(eve_density, radius, rng, 1)
    return [PolarPoint(float(a), float(b)) for a, b in zip(d, theta)]


def _bounding_radius(cfg, params, g_re, g_im, spec):
    theta, _ = angular_grid(spec)
    g = array_factor_mag(theta, cfg)
    if params.deterministic:
        peak = np.full(np.shape(g_re), float(np.max(g * g)))
    else:
        peak = np.empty(np.shape(g_re))
        step = max(1, (1 << 22) // g.size)
        for s in range(0, peak.size, step):
            h2 = gain_sq(g[None, :], params.rician_k, g_re[s:s + step, None],
                         g_im[s:s + step, None] ** 2)
            peak[s:s + step] = h2.max(axis=1)
    return _RADIUS_MARGIN * (c0(params) * peak) ** (1.0 / params.pathloss_exp)


def _outage_counts(cfg, params, g_re, g_im, trials, rng, spec):
    """Number of PPP trials with an eavesdropper inside the region, per draw."""
    radius = _bounding_radius(cfg, params, g_re, g_im, spec)
    n_draws = g_re.size
    counts, owner, d, theta = _ppp_arrays(
        params.eve_density, np.repeat(radius, trials), rng, n_draws * trials)
    draw_of_point = owner // trials
    g = array_factor_mag(theta, cfg) if theta.size else np.empty(0)
    if params.deterministic:
        h2 = g * g
    else:
        h2 = gain_sq(g, params.rician_k, g_re[draw_of_point], g_im[draw_of_point] ** 2)
    inside = d < (c0(params) * h2) ** (1.0 / params.pathloss_exp)
    hit = np.zeros(n_draws * trials, dtype=bool)
    hit[owner[inside]] = True
    return hit.reshape(n_draws, trials).sum(axis=1)


def estimate_ssop_fixed_fading(draw: FadingDraw, cfg: ArrayConfig, params: SystemParams,
                               mc: McConfig, spec: QuadratureSpec | None = None) -> McEstimate:
    """Fraction of ``mc.n_ppp_trials_per_draw`` PPP fields that cause outage."""
    spec = spec or QuadratureSpec()
    n = mc.n_ppp_trials_per_draw
    if params.eve_density == 0.0:
        return McEstimate(0.0, 0.0, 0.0, n)
    re = np.array([draw.g_re])
    im = np.array([draw.g_im])
    events = 0
    for block, start in enumerate(range(0, n, _BLOCK)):
        size = min(_BLOCK, n - start)
        rng = _block_rng(mc.root_seed, block)
        events += int(_outage_counts(cfg, params, re, im, size, rng, spec)[0])
    return _binomial_interval(events, n, mc.confidence)


def estimate_ssop_mean(cfg: ArrayConfig, params: SystemParams, mc: McConfig,
                       spec: QuadratureSpec | None = None,
                       rao_blackwell: bool = True) -> McEstimate:
    """Average SSOP over ``mc.n_fading_draws`` sampled fading realizations.

    With ``rao_blackwell`` (the default) each draw contributes its exact
    conditional outage probability 1 - exp(-lambda_e A).  Otherwise every
    draw gets ``mc.n_ppp_trials_per_draw`` explicit PPP fields, and the
    interval comes from the spread of the per-draw outage fractions.
    """
    spec = spec or QuadratureSpec()
    n = mc.n_fading_draws
    samples = np.empty(n)
    trials = mc.n_ppp_trials_per_draw
    for block, start in enumerate(range(0, n, _BLOCK)):
        size = min(_BLOCK, n - start)
        rng = _block_rng(mc.root_seed, block)
        re, im = sample_fading_batch(rng, size)
        if rao_blackwell:
            area = er_area_batch(cfg, params, re, im, spec)
            samples[start:start + size] = -np.expm1(-params.eve_density * area)
        else:
            hits = _outage_counts(cfg, params, re, im, trials, rng, spec)
            samples[start:start + size] = hits / trials
    if not rao_blackwell and trials * n > 0:
        events = int(round(samples.sum() * trials))
        if events < _WILSON_EVENTS:
            return _binomial_interval(events, n * trials, mc.confidence)
    return _mean_interval(samples, mc.confidence)
