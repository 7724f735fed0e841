"""Command line entry point: ``ssop sweep | selftest | contour | presets``.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 self-test failure.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .channel_model import sample_fading
from .errors import NumericalError, ParameterError
from .exposure_region import er_radius, reliability_radius
from .selftest import run_selftest
from .sweep import (PRESETS, config_objects, preset, read_config, run_sweeps,
                    sweep_from_config, write_csv)

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_SELFTEST = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ssop", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS, key=lambda n: int(n[3:])))
    src.add_argument("--config", type=Path, help="key-value config file")
    s.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override a config entry (repeatable)")
    s.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    s.add_argument("--seed", type=int, help="Monte-Carlo root seed")
    s.add_argument("--threads", type=int, default=1)

    t = sub.add_parser("selftest", help="run the built-in oracle checks")
    t.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("contour", help="emit (theta, D(theta)) samples for one fading draw")
    c.add_argument("--config", type=Path, required=True)
    c.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=360)
    c.add_argument("--out", type=Path)

    sub.add_parser("presets", help="list preset names")
    return p


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _cmd_sweep(args) -> int:
    if args.threads < 1:
        raise ParameterError("threads: must be >= 1")
    if args.seed is not None and args.seed < 0:
        raise ParameterError("seed: must be an unsigned integer")
    if args.preset:
        specs = preset(args.preset, args.seed)
    else:
        parser = read_config(args.config.read_text(), args.set)
        specs = [sweep_from_config(parser, args.seed)]
    rows = run_sweeps(specs, args.threads)
    out = _open_out(args.out)
    try:
        write_csv(rows, out)
    finally:
        if out is not sys.stdout:
            out.close()
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"row {r.sweep_var}={r.value:g}: {r.error}", file=sys.stderr)
    return EXIT_NUMERICAL if failed else EXIT_OK


def _cmd_contour(args) -> int:
    if args.samples < 1:
        raise ParameterError("samples: must be >= 1")
    parser = read_config(args.config.read_text(), args.set)
    cfg, params, _, _ = config_objects(parser)
    draw = sample_fading(np.random.default_rng(args.seed))
    theta = 2.0 * math.pi * np.arange(args.samples) / args.samples
    radius = er_radius(theta, cfg, params, draw)
    if not np.all(np.isfinite(radius)):
        raise NumericalError("non-finite contour radius")
    print(f"g_re={draw.g_re:.9g} g_im={draw.g_im:.9g} "
          f"reliability_radius_m={reliability_radius(cfg, params, draw):.9g}", file=sys.stderr)
    out = _open_out(args.out)
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("theta_deg", "radius_m"))
        for t, r in zip(np.degrees(theta), radius):
            w.writerow((format(t, ".9g"), format(r, ".9g")))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.cmd == "sweep":
            return _cmd_sweep(args)
        if args.cmd == "contour":
            return _cmd_contour(args)
        if args.cmd == "presets":
            print("\n".join(sorted(PRESETS, key=lambda n: int(n[3:]))))
            return EXIT_OK
        report = run_selftest(args.seed)
        sys.stdout.write(report.text())
        return EXIT_OK if report.passed else EXIT_SELFTEST
    except (ParameterError, OSError) as exc:
        print(f"ssop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, ArithmeticError) as exc:
        print(f"ssop: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
