"""Time the angular power-sum kernel: numba loop vs numpy broadcasting.

    python benchmarks/bench_kernels.py [--repeat 5]

Sizes match what ssop_mean (Gauss-Hermite pairs after mirror folding) and a
10^4-draw Monte-Carlo block hand to the kernel at default quadrature.
"""
import argparse
import time

import numpy as np

from ssop import ArrayConfig, QuadratureSpec, array_factor_mag, kernels
from ssop.special_functions import angular_grid

CASES = [
    # label, fading pairs, Rician K, exponent 2/beta
    ("ssop_mean beta=2", 64 * 32, 10.0, 1.0),
    ("ssop_mean beta=3", 64 * 32, 10.0, 2 / 3),
    ("ssop_mean beta=4", 64 * 32, 10.0, 0.5),
    ("mc block beta=3", 4096, 10.0, 2 / 3),
    ("mc 10^4 beta=5", 10_000, 1.0, 2 / 5),
]


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    theta, _ = angular_grid(QuadratureSpec())
    g = array_factor_mag(theta, ArrayConfig(8, 0.5, 0.3))
    rng = np.random.default_rng(0)
    print(f"{'case':<20}{'pairs':>8}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}"
          f"{'dispatch':>10}")
    for label, pairs, k, expo in CASES:
        re, im = rng.normal(0, np.sqrt(0.5), (2, pairs))
        im_sq = im * im
        t_np = _best(lambda: kernels.power_sums_numpy(g, k, re, im_sq, expo), args.repeat)
        if kernels.NUMBA_AVAILABLE:
            kernels.power_sums_numba(g, k, re[:2], im_sq[:2], expo)  # compile outside timing
            t_nb = _best(lambda: kernels.power_sums_numba(g, k, re, im_sq, expo), args.repeat)
            a = kernels.power_sums_numpy(g, k, re, im_sq, expo)
            b = kernels.power_sums_numba(g, k, re, im_sq, expo)
            assert np.allclose(a, b, rtol=1e-12), label
            nb, ratio = f"{1e3 * t_nb:12.2f}", f"{t_np / t_nb:9.1f}x"
        else:
            nb, ratio = f"{'n/a':>12}", f"{'n/a':>10}"
        picked = "numba" if kernels.USE_NUMBA and expo in kernels._NUMBA_EXPONENTS else "numpy"
        print(f"{label:<20}{pairs:>8}{1e3 * t_np:12.2f}{nb}{ratio}{picked:>10}")


if __name__ == "__main__":
    main()
