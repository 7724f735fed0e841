"""Built-in oracle checks run by ``ssop selftest``.

Each check computes a value through the library and compares it with an
independently derived expectation.  The report contains no timings, so two
runs with the same seed produce identical text.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

import numpy as np

from .array_geometry import (ArrayConfig, array_factor_mag, pattern_area_approx,
                             pattern_area_exact, pattern_area_numeric, pattern_area_term,
                             q_series, steering_vector)
from .channel_model import (DETERMINISTIC, FadingDraw, SystemParams, c0, capacity_at,
                            equiv_gain_sq, snr_at)
from .exposure_region import er_area, er_radius, reliability_radius
from .mc_sim import McConfig, estimate_ssop_mean
from .special_functions import (QuadratureSpec, bessel_j0, gauss_hermite_2d,
                                integrate_periodic)
from .ssop_analytics import (prob_m_eves, ssop_instant, ssop_mean, ssop_upper,
                             tightness_ratio)


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    observed: float
    expected: float
    tol: float
    passed: bool

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag} {self.module}::{self.name} observed={self.observed:.12g} "
                f"expected={self.expected:.12g} tol={self.tol:.3g}")


@dataclass(frozen=True)
class SelftestReport:
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.passed]

    def text(self) -> str:
        lines = [r.line() for r in self.results]
        n_fail = len(self.failures)
        lines.append(f"{len(self.results) - n_fail} passed, {n_fail} failed")
        return "\n".join(lines) + "\n"


def j0_series_decimal(x: float, digits: int = 60) -> float:
    """Maclaurin series of J0 in high-precision decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = digits
        q = (Decimal(x) / 2) ** 2
        term = Decimal(1)
        total = Decimal(1)
        m = 0
        eps = Decimal(10) ** (-digits + 5)
        while True:
            m += 1
            term = -term * q / (m * m)
            total += term
            if abs(term) < eps and m > float(q):
                return float(total)


def _checks(seed: int):
    spec = QuadratureSpec()
    base = SystemParams()
    c = c0(base)
    lam = base.eve_density

    for x in (0.0, 1.0, math.pi, 2.404825557695773, 7.5, 11.9, 12.5, 15.0, 20.0, 30.0):
        yield ("special_functions", f"j0_series_oracle[x={x:g}]",
               bessel_j0(x), j0_series_decimal(x), 1e-8)
    for x in (0.0, 1.0, math.pi, 2 * math.pi, 10.0):
        integral = integrate_periodic(lambda t: np.cos(x * np.sin(t)), spec) / (2 * math.pi)
        yield ("special_functions", f"j0_integral_repr[x={x:g}]", bessel_j0(x), integral, 1e-6)
    yield ("special_functions", "periodic_cos_sq",
           integrate_periodic(lambda t: np.cos(t) ** 2, spec), math.pi, 1e-12)
    yield ("special_functions", "hermite_second_moment",
           gauss_hermite_2d(lambda x, y: x * x + y * y, spec), 1.0, 1e-12)

    yield ("array_geometry", "steering_pi_over_6",
           float(np.max(np.abs(steering_vector(math.pi / 6, ArrayConfig(3)) - [1, -1j, -1]))),
           0.0, 1e-12)
    yield ("array_geometry", "array_factor_n2",
           array_factor_mag(math.pi / 6, ArrayConfig(2)), 1.0, 1e-12)
    for deg, value, tol in ((0.0, 4.1326, 5e-4), (90.0, 15.3761, 5e-4),
                            (48.35, 2 * math.pi, 1e-2)):
        yield ("array_geometry", f"pattern_area_golden[theta_b={deg:g}]",
               pattern_area_exact(ArrayConfig(8, 0.5, math.radians(deg))), value, tol)
    for n, deg, s in ((4, 30.0, 0.5), (16, 75.0, 1.0), (11, 15.0, 0.25)):
        cfg = ArrayConfig(n, s, math.radians(deg))
        yield ("array_geometry", f"pattern_area_series_vs_quadrature[N={n},tb={deg:g},s={s:g}]",
               pattern_area_exact(cfg), pattern_area_numeric(cfg, spec), 1e-6)
    cfg8 = ArrayConfig(8)
    yield ("array_geometry", "term_1", pattern_area_term(1, cfg8),
           4 * math.pi * 7 / 8 * j0_series_decimal(math.pi), 1e-10)
    yield ("array_geometry", "approx_one_term", pattern_area_approx(cfg8, 1),
           2 * math.pi + 4 * math.pi * 7 / 8 * j0_series_decimal(math.pi), 1e-10)
    yield ("array_geometry", "q_odd_zero_at_30deg",
           q_series(3, ArrayConfig(8, 0.5, math.radians(30))), 0.0, 1e-12)

    yield ("channel_model", "c0_default", c, 31.6227766016838 / (2 ** 2.4594 - 1), 1e-9)
    yield ("channel_model", "gain_k1", equiv_gain_sq(
        1.0, SystemParams(rician_k=1.0), FadingDraw(0.5, -0.5)), 1.25, 1e-12)
    yield ("channel_model", "gain_rayleigh", equiv_gain_sq(
        3.0, SystemParams(rician_k=0.0), FadingDraw(0.3, -0.4)), 0.25, 1e-12)
    yield ("channel_model", "snr_default", snr_at(1.0, math.sqrt(8), base, FadingDraw(0, 0)),
           8 * 10 ** 1.5, 1e-9)
    yield ("channel_model", "capacity_unit", capacity_at(
        1.0, 1.0, SystemParams(snr_budget_db=0.0, rate_codeword=2.0), FadingDraw(0, 0)), 1.0, 1e-12)

    yield ("exposure_region", "radius_at_bob", er_radius(0.0, cfg8, base, FadingDraw(0, 0)),
           math.sqrt(8 * c), 1e-9)
    yield ("exposure_region", "area_equals_half_c0_a0",
           er_area(cfg8, base, FadingDraw(0, 0), spec), 0.5 * c * pattern_area_exact(cfg8), 1e-8)
    yield ("exposure_region", "reliability_radius",
           reliability_radius(cfg8, base, FadingDraw(0, 0)),
           math.sqrt(10 ** 1.5 * 8 / (2 ** 3.4594 - 1)), 1e-9)

    yield ("ssop_analytics", "poisson_mass", prob_m_eves(1, 1.0, 1.0), math.exp(-1), 1e-15)
    yield ("ssop_analytics", "instant_half", ssop_instant(math.log(2), 1.0), 0.5, 1e-15)
    rayleigh = SystemParams(rician_k=0.0)
    closed = 1 - 1 / (1 + lam * math.pi * c)
    yield ("ssop_analytics", "rayleigh_closed_form", ssop_mean(cfg8, rayleigh, spec),
           closed, 1e-6 * closed)
    yield ("ssop_analytics", "rayleigh_bound", ssop_upper(cfg8, rayleigh),
           -math.expm1(-lam * math.pi * c), 1e-15)
    for deg in (0.0, 45.0, 90.0):
        cfg = ArrayConfig(8, 0.5, math.radians(deg))
        yield ("ssop_analytics", f"jensen_collapse[theta_b={deg:g}]",
               ssop_upper(cfg, base), ssop_mean(cfg, base, spec), 1e-9)
    yield ("ssop_analytics", "eta_rayleigh", tightness_ratio(cfg8, rayleigh, spec),
           -math.expm1(-lam * math.pi * c) / closed, 1e-9)

    mc = McConfig(n_fading_draws=4000, root_seed=seed)
    est = estimate_ssop_mean(cfg8, rayleigh, mc, spec)
    inside = est.ci_low <= closed <= est.ci_high
    yield ("mc_sim", "rayleigh_ci_contains_closed_form", est.p_hat, closed,
           max(closed - est.ci_low, est.ci_high - closed), inside)
    again = estimate_ssop_mean(cfg8, rayleigh, mc, spec)
    yield ("mc_sim", "reproducible", again.p_hat, est.p_hat, 0.0)
    det = estimate_ssop_mean(cfg8, SystemParams(rician_k=DETERMINISTIC), mc, spec)
    yield ("mc_sim", "deterministic_zero_width", det.ci_high - det.ci_low, 0.0, 1e-15)


def run_selftest(seed: int = 0) -> SelftestReport:
    results = []
    checks = _checks(seed)
    while True:
        try:
            item = next(checks)
        except StopIteration:
            break
        except Exception as exc:  # a crashing check is a failed check
            module = type(exc).__module__.rpartition(".")[2]
            results.append(CheckResult(module, f"raised {type(exc).__name__}: {exc}",
                                       math.nan, math.nan, 0.0, False))
            break
        module, name, observed, expected, tol = item[:5]
        passed = item[5] if len(item) > 5 else abs(observed - expected) <= tol
        results.append(CheckResult(module, name, float(observed), float(expected),
                                   float(tol), bool(passed)))
    return SelftestReport(tuple(results))
