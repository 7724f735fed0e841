"""End-to-end acceptance checks; the terminal summary prints one AC line each."""
import io
import math

import numpy as np
import pytest

from ssop import (ArrayConfig, McConfig, QuadratureSpec, SystemParams, bessel_j0,
                  estimate_ssop_mean, integrate_periodic, pattern_area_exact,
                  pattern_area_numeric, ssop_mean, ssop_upper, tightness_ratio)
from ssop.sweep import preset, read_csv, run_sweeps, to_csv
from oracles import c0_default, j0_series

rad = math.radians
criterion = pytest.mark.criterion


@criterion(1, "pattern-area golden numbers")
def test_ac1_pattern_area_golden():
    assert abs(pattern_area_exact(ArrayConfig(8, 0.5, rad(0))) - 4.1326) <= 5e-4
    assert abs(pattern_area_exact(ArrayConfig(8, 0.5, rad(90))) - 15.3761) <= 5e-4
    assert abs(pattern_area_exact(ArrayConfig(8, 0.5, rad(48.35))) - 2 * math.pi) <= 1e-2


@criterion(2, "numeric pattern area equals the Bessel series")
def test_ac2_numeric_equals_exact():
    spec = QuadratureSpec()
    worst = 0.0
    for s in (0.25, 0.5, 1.0):
        for n in range(1, 17):
            for deg in range(0, 91, 15):
                cfg = ArrayConfig(n, s, rad(deg))
                worst = max(worst, abs(pattern_area_numeric(cfg, spec) - pattern_area_exact(cfg)))
    assert worst <= 1e-6


@criterion(3, "bound collapses to the mean for K=inf, beta=2")
def test_ac3_jensen_collapse():
    p, spec = SystemParams(), QuadratureSpec()
    for n in (1, 2, 4, 8, 16, 32):
        for deg in range(0, 91, 15):
            cfg = ArrayConfig(n, 0.5, rad(deg))
            assert abs(ssop_upper(cfg, p) - ssop_mean(cfg, p, spec)) <= 1e-9
            assert abs(tightness_ratio(cfg, p, spec) - 1.0) <= 1e-9


@criterion(4, "Rayleigh closed form")
def test_ac4_rayleigh_closed_form():
    x = 1e-4 * math.pi * c0_default()
    value = ssop_mean(ArrayConfig(8), SystemParams(rician_k=0.0), QuadratureSpec())
    assert value == pytest.approx(1 - 1 / (1 + x), rel=1e-6)


@criterion(5, "upper bound dominates the mean")
def test_ac5_bound_dominance():
    spec = QuadratureSpec()
    for k in (0.0, 0.1, 1.0, 10.0, 50.0, math.inf):
        for beta in (2.0, 3.0, 4.0, 5.0, 6.0):
            p = SystemParams(rician_k=k, pathloss_exp=beta)
            for n in (1, 2, 4, 8, 16):
                for deg in (0, 30, 60, 90):
                    cfg = ArrayConfig(n, 0.5, rad(deg))
                    assert ssop_upper(cfg, p) >= ssop_mean(cfg, p, spec) - 1e-9, (k, beta, n, deg)


@criterion(6, "Monte Carlo matches numerics")
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_ac6_simulation_match(seed):
    p, spec = SystemParams(rician_k=10.0, pathloss_exp=3.0), QuadratureSpec()
    for deg in range(0, 91, 15):
        cfg = ArrayConfig(8, 0.5, rad(deg))
        est = estimate_ssop_mean(cfg, p, McConfig(n_fading_draws=10_000, root_seed=seed), spec)
        assert est.ci_low <= ssop_mean(cfg, p, spec) <= est.ci_high, deg


@criterion(7, "trend properties")
def test_ac7a_upper_monotone_in_theta_b():
    values = [ssop_upper(ArrayConfig(8, 0.5, rad(d)), SystemParams()) for d in range(91)]
    drops = [d for d in range(90) if values[d + 1] < values[d]]
    assert not drops, f"decreases after theta_b = {drops} deg"


@criterion(7, "trend properties")
def test_ac7b_rayleigh_invariance():
    spec = QuadratureSpec()
    for beta in (2.0, 3.0, 4.0, 5.0, 6.0):
        p = SystemParams(rician_k=0.0, pathloss_exp=beta)
        cfgs = [ArrayConfig(n, 0.5, rad(d)) for n in (1, 2, 4, 8, 16) for d in (0, 30, 60, 90)]
        assert len({ssop_mean(c, p, spec) for c in cfgs}) == 1
        assert len({ssop_upper(c, p) for c in cfgs}) == 1


@criterion(7, "trend properties")
def test_ac7c_large_n_levels_off():
    rows = read_csv(io.StringIO(to_csv(run_sweeps(preset("fig7")))))
    traces = {}
    for r in rows:
        traces.setdefault(r.sweep_var, []).append(r)
    assert len(traces) == 3
    for rows in traces.values():
        for col in ("a0", "p_mean", "p_upper"):
            last, prev = getattr(rows[-1], col), getattr(rows[-2], col)
            assert abs(last - prev) < 0.05 * abs(last)


@criterion(7, "trend properties")
def test_ac7d_eta_grows_with_n():
    p, spec = SystemParams(pathloss_exp=3.0), QuadratureSpec()
    etas = [tightness_ratio(ArrayConfig(n), p, spec) for n in (2, 4, 8, 16, 32)]
    assert all(b >= a for a, b in zip(etas, etas[1:])), etas


@criterion(8, "Bessel J0 correctness")
def test_ac8_bessel():
    grid = np.linspace(0.0, 30.0, 2001)
    worst = max(abs(bessel_j0(x) - j0_series(x)) for x in grid)
    assert worst <= 1e-8
    spec = QuadratureSpec()
    for x in (0.5, 2.404825557695773, math.pi, 7.0, 15.0):
        integral = integrate_periodic(lambda t: np.cos(x * np.sin(t)), spec) / (2 * math.pi)
        assert abs(bessel_j0(x) - integral) <= 1e-6
