"""Hot inner loops, compiled with numba when available.

The angular power sum ``sum_j gain(theta_j)**expo`` is evaluated once per
Gauss-Hermite node pair in the averaged SSOP and once per fading draw in the
Monte-Carlo estimator; everything else in the package is cheap.

Set ``SSOP_DISABLE_NUMBA=1`` to force the pure-numpy path.  Both variants are
always importable under explicit names so they can be compared.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get(
    "SSOP_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes", "on")

_NUMBA_EXPONENTS = (1.0, 0.5)

# rows of the (draws x angles) work array per numpy chunk
_CHUNK_ELEMENTS = 1 << 22


def gain_sq(g, k, g_re, g_im_sq):
    """Equivalent channel power for finite Rician factor ``k``.

    Written as a sum of squares, ((sqrt(k) g + g_re)^2 + g_im^2) / (k + 1),
    so it is nonnegative for every input.  Works on scalars and on
    broadcastable arrays, and is also compiled by numba for the kernels.
    """
    a = math.sqrt(k) * g + g_re
    return (a * a + g_im_sq) / (k + 1.0)


def power_sums_numpy(g_mag, k, g_re, g_im_sq, expo):
    g_mag = np.ascontiguousarray(g_mag, dtype=np.float64)
    g_re = np.ascontiguousarray(g_re, dtype=np.float64)
    g_im_sq = np.ascontiguousarray(g_im_sq, dtype=np.float64)
    out = np.empty(g_re.shape[0])
    step = max(1, _CHUNK_ELEMENTS // max(1, g_mag.shape[0]))
    for start in range(0, g_re.shape[0], step):
        stop = start + step
        block = gain_sq(g_mag[None, :], k, g_re[start:stop, None],
                        g_im_sq[start:stop, None])
        if expo != 1.0:
            block = block ** expo
        out[start:stop] = block.sum(axis=1)
    return out


if NUMBA_AVAILABLE:
    _gain_sq_jit = numba.njit(cache=True, nogil=True)(gain_sq)

    @numba.njit(cache=True, nogil=True)
    def _power_sums_loop(g_mag, k, g_re, g_im_sq, expo):
        n_pairs = g_re.shape[0]
        n_angles = g_mag.shape[0]
        out = np.empty(n_pairs)
        unit = expo == 1.0
        half = expo == 0.5
        for p in range(n_pairs):
            x = g_re[p]
            ysq = g_im_sq[p]
            s = 0.0
            for j in range(n_angles):
                b = _gain_sq_jit(g_mag[j], k, x, ysq)
                if unit:
                    s += b
                elif half:
                    s += math.sqrt(b)
                elif b > 0.0:
                    s += b ** expo
            out[p] = s
        return out

    def power_sums_numba(g_mag, k, g_re, g_im_sq, expo):
        return _power_sums_loop(
            np.ascontiguousarray(g_mag, dtype=np.float64), float(k),
            np.ascontiguousarray(g_re, dtype=np.float64),
            np.ascontiguousarray(g_im_sq, dtype=np.float64), float(expo))
else:  # pragma: no cover
    power_sums_numba = None


def power_sums(g_mag, k, g_re, g_im_sq, expo):
    """Sum over angles of ``gain_sq(g_mag[j], k, g_re[p], g_im_sq[p])**expo``.

    Parameters
    ----------
    g_mag : (M,) array
        Array-factor magnitude on the angular grid.
    k : float
        Finite Rician factor, ``k >= 0``.
    g_re, g_im_sq : (P,) arrays
        Real part and squared imaginary part of each fading sample.
    expo : float
        Exponent ``2 / beta``.

    Returns
    -------
    (P,) array of angular sums (multiply by the grid step to integrate).
    """
    # numpy's SIMD pow beats numba's scalar pow, so the compiled loop only
    # takes the exponents it can do without pow (beta = 2 and beta = 4)
    if USE_NUMBA and expo in _NUMBA_EXPONENTS:
        return power_sums_numba(g_mag, k, g_re, g_im_sq, expo)
    return power_sums_numpy(g_mag, k, g_re, g_im_sq, expo)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
