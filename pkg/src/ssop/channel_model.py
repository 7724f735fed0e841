"""Rician equivalent channel, SNR and capacity at a polar location.

The N-element NLOS vector is never materialized: its projection onto the
beamformer is a single CN(0, 1) variable, stored as a ``FadingDraw``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .kernels import gain_sq

#: Rician factor of a deterministic (pure line-of-sight) channel.
DETERMINISTIC = math.inf

_NLOS_STD = math.sqrt(0.5)


@dataclass(frozen=True)
class SystemParams:
    """Link budget and secrecy parameters (defaults are the reference operating point)."""

    snr_budget_db: float = 15.0
    rate_codeword: float = 3.4594
    rate_secrecy: float = 1.0
    eve_density: float = 1e-4
    pathloss_exp: float = 2.0
    rician_k: float = DETERMINISTIC

    def __post_init__(self):
        if not math.isfinite(self.snr_budget_db):
            raise ParameterError(f"snr_budget_db must be finite, got {self.snr_budget_db!r}")
        if not self.rate_secrecy > 0:
            raise ParameterError(f"rate_secrecy must be positive, got {self.rate_secrecy!r}")
        if not self.rate_codeword > self.rate_secrecy:
            raise ParameterError(
                "rate_codeword must exceed rate_secrecy "
                f"({self.rate_codeword!r} <= {self.rate_secrecy!r})")
        if not 2.0 <= self.pathloss_exp <= 6.0:
            raise ParameterError(f"pathloss_exp must lie in [2, 6], got {self.pathloss_exp!r}")
        if not (self.eve_density >= 0 and math.isfinite(self.eve_density)):
            raise ParameterError(f"eve_density must be >= 0, got {self.eve_density!r}")
        if not self.rician_k >= 0:
            raise ParameterError(f"rician_k must be >= 0 or inf, got {self.rician_k!r}")
        c = _c0(self.snr_budget_db, self.rate_codeword, self.rate_secrecy)
        if not (math.isfinite(c) and c > 0):
            raise ParameterError(f"derived c0 is not finite and positive: {c!r}")

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_budget_db / 10.0)

    @property
    def deterministic(self) -> bool:
        return math.isinf(self.rician_k)


@dataclass(frozen=True)
class FadingDraw:
    """Real and imaginary part of the projected NLOS coefficient g ~ CN(0, 1)."""

    g_re: float
    g_im: float


def _c0(snr_db, rate_codeword, rate_secrecy):
    den = 2.0 ** (rate_codeword - rate_secrecy) - 1.0
    if not den > 0:
        raise ParameterError("rate_codeword must exceed rate_secrecy")
    return 10.0 ** (snr_db / 10.0) / den


def c0(params: SystemParams) -> float:
    """P_t / (sigma_n^2 (2^(R_B - R_s) - 1))."""
    return _c0(params.snr_budget_db, params.rate_codeword, params.rate_secrecy)


def equiv_gain_sq(g_mag, params: SystemParams, draw: FadingDraw):
    """|h~|^2 for array-factor magnitude ``g_mag`` (scalar or array)."""
    g_mag = np.asarray(g_mag, dtype=np.float64)
    if np.any(g_mag < 0):
        raise ParameterError("g_mag must be nonnegative")
    k = params.rician_k
    if math.isinf(k):
        out = g_mag * g_mag
    else:
        out = gain_sq(g_mag, k, draw.g_re, draw.g_im * draw.g_im)
    return float(out) if out.ndim == 0 else out


def sample_fading(rng: np.random.Generator) -> FadingDraw:
    re, im = rng.normal(0.0, _NLOS_STD, size=2)
    return FadingDraw(float(re), float(im))


def sample_fading_batch(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``n`` independent draws as (g_re, g_im) arrays."""
    z = rng.normal(0.0, _NLOS_STD, size=(n, 2))
    return z[:, 0].copy(), z[:, 1].copy()


def snr_at(d, g_mag, params: SystemParams, draw: FadingDraw):
    d = np.asarray(d, dtype=np.float64)
    if np.any(d <= 0):
        raise ParameterError("distance must be positive")
    out = params.snr_linear * d ** (-params.pathloss_exp) * equiv_gain_sq(g_mag, params, draw)
    return float(out) if np.ndim(out) == 0 else out


def capacity_at(d, g_mag, params: SystemParams, draw: FadingDraw):
    """log2(1 + SNR) in bits/s/Hz."""
    out = np.log1p(snr_at(d, g_mag, params, draw)) / math.log(2.0)
    return float(out) if np.ndim(out) == 0 else out
