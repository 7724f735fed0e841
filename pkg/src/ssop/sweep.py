"""Parameter sweeps, figure presets and the CSV table format.

This is the user-facing boundary, so ``theta_b`` sweep values and the
``doe_angle_deg`` config key are in degrees.  Everything below this module
works in radians.
"""
from __future__ import annotations

import configparser
import csv
import dataclasses
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .array_geometry import ArrayConfig, pattern_area_exact
from .channel_model import DETERMINISTIC, SystemParams
from .errors import ParameterError, SsopError
from .mc_sim import McConfig, estimate_ssop_mean
from .special_functions import QuadratureSpec
from .ssop_analytics import ssop_mean, ssop_upper

VARY = ("theta_b", "n_elements", "rician_k", "pathloss")
OUTPUTS = ("a0", "p_mean", "p_upper", "eta", "mc_estimate")
COLUMNS = ("sweep_var", "value", "a0", "p_mean", "p_upper", "eta",
           "mc_p_hat", "mc_ci_low", "mc_ci_high", "seed")
_FLOAT_COLUMNS = ("value", "a0", "p_mean", "p_upper", "eta",
                  "mc_p_hat", "mc_ci_low", "mc_ci_high")


@dataclass(frozen=True)
class SweepSpec:
    vary: str
    values: tuple
    array: ArrayConfig = field(default_factory=ArrayConfig)
    system: SystemParams = field(default_factory=SystemParams)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    mc: McConfig | None = None
    outputs: tuple = ("a0", "p_mean", "p_upper", "eta")
    label: str = ""

    def __post_init__(self):
        if self.vary not in VARY:
            raise ParameterError(f"vary: expected one of {VARY}, got {self.vary!r}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ParameterError("values: must not be empty")
        diffs = np.diff(values)
        if len(values) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ParameterError("values: must be strictly ordered")
        object.__setattr__(self, "values", values)
        outputs = tuple(self.outputs)
        unknown = [o for o in outputs if o not in OUTPUTS]
        if unknown or not outputs:
            raise ParameterError(f"outputs: unknown or empty selection {unknown or outputs}")
        if "mc_estimate" in outputs and self.mc is None:
            raise ParameterError("mc: required when outputs include mc_estimate")
        object.__setattr__(self, "outputs", outputs)
        for v in values:  # fail on the first bad value before any work
            self.configure(v)

    @property
    def sweep_var(self) -> str:
        return f"{self.vary}[{self.label}]" if self.label else self.vary

    def configure(self, value: float) -> tuple[ArrayConfig, SystemParams]:
        """Array and system parameters for one sweep value."""
        try:
            if self.vary == "theta_b":
                return (dataclasses.replace(self.array, doe_angle=math.radians(value)),
                        self.system)
            if self.vary == "n_elements":
                if value != int(value):
                    raise ParameterError("n_elements sweep values must be integers")
                return dataclasses.replace(self.array, n_elements=int(value)), self.system
            if self.vary == "rician_k":
                return self.array, dataclasses.replace(self.system, rician_k=value)
            return self.array, dataclasses.replace(self.system, pathloss_exp=value)
        except ParameterError as exc:
            raise ParameterError(f"values: {value!r} is invalid for {self.vary}: {exc}") from None


@dataclass
class SweepResult:
    sweep_var: str
    value: float
    a0: float | None = None
    p_mean: float | None = None
    p_upper: float | None = None
    eta: float | None = None
    mc_p_hat: float | None = None
    mc_ci_low: float | None = None
    mc_ci_high: float | None = None
    seed: int | None = None
    error: str | None = None


def _row(spec: SweepSpec, value: float) -> SweepResult:
    row = SweepResult(spec.sweep_var, value)
    try:
        cfg, params = spec.configure(value)
        want = set(spec.outputs)
        if "a0" in want:
            row.a0 = pattern_area_exact(cfg)
        if want & {"p_mean", "eta"}:
            row.p_mean = ssop_mean(cfg, params, spec.quadrature)
        if want & {"p_upper", "eta"}:
            row.p_upper = ssop_upper(cfg, params)
        if "eta" in want and row.p_mean > 0:
            row.eta = row.p_upper / row.p_mean
        if "mc_estimate" in want:
            est = estimate_ssop_mean(cfg, params, spec.mc, spec.quadrature)
            row.mc_p_hat, row.mc_ci_low, row.mc_ci_high = est.p_hat, est.ci_low, est.ci_high
            row.seed = spec.mc.root_seed
    except (SsopError, ArithmeticError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[SweepResult]:
    """One row per sweep value, in input order regardless of ``threads``."""
    if threads <= 1:
        return [_row(spec, v) for v in spec.values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda v: _row(spec, v), spec.values))


def run_sweeps(specs, threads: int = 1) -> list[SweepResult]:
    rows = []
    for spec in specs:
        rows.extend(run_sweep(spec, threads))
    return rows


# -- presets ----------------------------------------------------------------

def _deg_range(start, stop, step):
    return tuple(float(v) for v in np.arange(start, stop + 0.5 * step, step))


_K_GRID = (0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0,
           DETERMINISTIC)
_BETAS = (2.0, 3.0, 4.0, 5.0, 6.0)


def _fig3():
    # pattern area as Bessel terms accumulate with the array size
    return [SweepSpec("n_elements", tuple(range(1, 9)), outputs=("a0", "p_upper"))]


def _fig4():
    return [SweepSpec("theta_b", _deg_range(0, 90, 1), ArrayConfig(8),
                      SystemParams(pathloss_exp=2.0, rician_k=DETERMINISTIC))]


def _fig5():
    return [SweepSpec("n_elements", tuple(range(1, 17)),
                      ArrayConfig(doe_angle=math.radians(tb)), outputs=("a0",),
                      label=f"theta_b={tb:g}")
            for tb in (0, 30, 60)]


def _fig6():
    return [SweepSpec("rician_k", _K_GRID, ArrayConfig(8, doe_angle=math.radians(tb)),
                      SystemParams(snr_budget_db=40.0, pathloss_exp=beta),
                      outputs=("a0", "p_upper"), label=f"theta_b={tb:g};beta={beta:g}")
            for tb in (0.0, 48.35, 90.0) for beta in _BETAS]


def _fig7():
    return [SweepSpec("n_elements", tuple(range(1, 65)),
                      ArrayConfig(doe_angle=math.radians(tb)),
                      SystemParams(pathloss_exp=2.0, rician_k=DETERMINISTIC),
                      outputs=("a0", "p_mean", "p_upper"), label=f"theta_b={tb:g}")
            for tb in (0, 30, 60)]


def _fig8():
    return [SweepSpec("theta_b", _deg_range(0, 90, 15), ArrayConfig(8),
                      SystemParams(pathloss_exp=3.0, rician_k=10.0),
                      mc=McConfig(n_fading_draws=10_000),
                      outputs=("p_mean", "mc_estimate"))]


def _fig9():
    return [SweepSpec("theta_b", _deg_range(0, 90, 5), ArrayConfig(8),
                      SystemParams(pathloss_exp=3.0, rician_k=k),
                      outputs=("p_mean", "p_upper", "eta"), label=f"k={k:g}")
            for k in (0.0, 1.0, 10.0, DETERMINISTIC)]


def _fig10():
    return [SweepSpec("n_elements", tuple(range(1, 33)), ArrayConfig(doe_angle=0.0),
                      SystemParams(pathloss_exp=3.0, rician_k=k),
                      outputs=("p_mean", "p_upper", "eta"), label=f"k={k:g}")
            for k in (0.0, 1.0, 10.0, DETERMINISTIC)]


def _fig11():
    return [SweepSpec("rician_k", _K_GRID, ArrayConfig(8),
                      SystemParams(pathloss_exp=beta),
                      outputs=("p_mean", "p_upper", "eta"), label=f"beta={beta:g}")
            for beta in _BETAS]


def _fig12():
    return [SweepSpec("theta_b", _deg_range(0, 90, 5), ArrayConfig(8),
                      SystemParams(pathloss_exp=beta, rician_k=k),
                      outputs=("p_mean", "p_upper", "eta"), label=f"k={k:g};beta={beta:g}")
            for k in (0.0, DETERMINISTIC) for beta in _BETAS]


def _fig13():
    return [SweepSpec("n_elements", (2, 4, 8, 16, 32, 64), ArrayConfig(doe_angle=0.0),
                      SystemParams(pathloss_exp=beta, rician_k=k),
                      outputs=("p_mean", "p_upper", "eta"), label=f"k={k:g};beta={beta:g}")
            for k in (0.0, DETERMINISTIC) for beta in _BETAS]


PRESETS = {
    "fig3": _fig3, "fig4": _fig4, "fig5": _fig5, "fig6": _fig6, "fig7": _fig7,
    "fig8": _fig8, "fig9": _fig9, "fig10": _fig10, "fig11": _fig11,
    "fig12": _fig12, "fig13": _fig13,
}


def preset(name: str, seed: int | None = None) -> list[SweepSpec]:
    try:
        specs = PRESETS[name]()
    except KeyError:
        raise ParameterError(
            f"preset: unknown name {name!r}; choose from {', '.join(PRESETS)}") from None
    if seed is not None:
        specs = [dataclasses.replace(s, mc=dataclasses.replace(s.mc, root_seed=seed))
                 if s.mc is not None else s for s in specs]
    return specs


# -- config files -----------------------------------------------------------

def parse_values(text: str) -> tuple[float, ...]:
    """``a,b,c`` or an inclusive ``start:stop:step`` range."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(f"values: bad range {text!r}, expected start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step == 0 or (stop - start) / step < 0:
            raise ParameterError(f"values: empty range {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(count))
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ParameterError(f"values: {exc}") from None


def _apply_overrides(parser: configparser.ConfigParser, overrides):
    for item in overrides or ():
        key, sep, value = item.partition("=")
        section, dot, option = key.strip().partition(".")
        if not sep or not dot:
            raise ParameterError(f"override {item!r} must look like section.key=value")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, option, value.strip())


def _typed(section, key, cast, default):
    if section is None or key not in section:
        return default
    raw = section[key]
    try:
        return cast(raw)
    except ValueError:
        raise ParameterError(f"{section.name}.{key}: cannot parse {raw!r}") from None


def read_config(text: str, overrides=None) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParameterError(f"config: {exc}") from None
    _apply_overrides(parser, overrides)
    return parser


def _section(parser, name):
    return parser[name] if parser.has_section(name) else None


def config_objects(parser: configparser.ConfigParser):
    """(ArrayConfig, SystemParams, QuadratureSpec, McConfig or None) from a config."""
    a = _section(parser, "array")
    s = _section(parser, "system")
    q = _section(parser, "quadrature")
    m = _section(parser, "mc")
    base_a, base_s, base_q, base_m = ArrayConfig(), SystemParams(), QuadratureSpec(), McConfig()
    try:
        array = ArrayConfig(
            _typed(a, "n_elements", int, base_a.n_elements),
            _typed(a, "spacing_wavelengths", float, base_a.spacing_wavelengths),
            math.radians(_typed(a, "doe_angle_deg", float, 0.0)))
        system = SystemParams(
            _typed(s, "snr_budget_db", float, base_s.snr_budget_db),
            _typed(s, "rate_codeword", float, base_s.rate_codeword),
            _typed(s, "rate_secrecy", float, base_s.rate_secrecy),
            _typed(s, "eve_density", float, base_s.eve_density),
            _typed(s, "pathloss_exp", float, base_s.pathloss_exp),
            _typed(s, "rician_k", float, base_s.rician_k))
        quad = QuadratureSpec(
            _typed(q, "angular_nodes", int, base_q.angular_nodes),
            _typed(q, "hermite_nodes", int, base_q.hermite_nodes),
            _typed(q, "abs_tol", float, base_q.abs_tol))
        mc = None
        if m is not None:
            mc = McConfig(
                _typed(m, "n_fading_draws", int, base_m.n_fading_draws),
                _typed(m, "n_ppp_trials_per_draw", int, base_m.n_ppp_trials_per_draw),
                _typed(m, "root_seed", int, base_m.root_seed),
                _typed(m, "confidence", float, base_m.confidence))
    except ParameterError as exc:
        raise ParameterError(f"config: {exc}") from None
    return array, system, quad, mc


def sweep_from_config(parser: configparser.ConfigParser, seed: int | None = None) -> SweepSpec:
    sw = _section(parser, "sweep")
    if sw is None or "vary" not in sw or "values" not in sw:
        raise ParameterError("sweep: section [sweep] with 'vary' and 'values' is required")
    array, system, quad, mc = config_objects(parser)
    outputs = tuple(o.strip() for o in sw.get("outputs", "a0,p_mean,p_upper,eta").split(",")
                    if o.strip())
    if seed is not None:
        mc = dataclasses.replace(mc or McConfig(), root_seed=seed)
    return SweepSpec(sw["vary"].strip(), parse_values(sw["values"]), array, system, quad,
                     mc, outputs, sw.get("label", "").strip())


# -- CSV --------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return ""
    return format(float(value), ".9g")


def write_csv(rows, stream) -> None:
    """Write rows with 9 significant digits; an ``error`` column is added on failure."""
    with_error = any(r.error for r in rows)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COLUMNS + (("error",) if with_error else ()))
    for r in rows:
        cells = [r.sweep_var] + [_fmt(getattr(r, c)) for c in COLUMNS[1:]]
        if with_error:
            cells.append(r.error or "")
        writer.writerow(cells)


def to_csv(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def read_csv(stream) -> list[SweepResult]:
    reader = csv.DictReader(stream)
    missing = [c for c in COLUMNS if c not in (reader.fieldnames or ())]
    if missing:
        raise ParameterError(f"csv: missing columns {missing}")
    rows = []
    for rec in reader:
        kw = {c: (float(rec[c]) if rec[c] != "" else None) for c in _FLOAT_COLUMNS}
        kw["seed"] = int(rec["seed"]) if rec["seed"] != "" else None
        kw["error"] = rec.get("error") or None
        rows.append(SweepResult(rec["sweep_var"], **kw))
    return rows
