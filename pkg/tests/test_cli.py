import io
import math
import subprocess
import sys
import time

import pytest

from ssop import cli, selftest, special_functions
from ssop.errors import NumericalError, ParameterError
from ssop.sweep import (COLUMNS, PRESETS, SweepSpec, preset, read_config, read_csv,
                        run_sweep, run_sweeps, sweep_from_config, to_csv)

CONFIG = """\
[sweep]
vary = theta_b
values = 0:90:30
outputs = a0,p_mean,p_upper,eta

[array]
n_elements = 8

[system]
rician_k = inf
pathloss_exp = 2
"""


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(csv_text):
    return read_csv(io.StringIO(csv_text))


def _traces(rows):
    out = {}
    for r in rows:
        out.setdefault(r.sweep_var, []).append(r)
    return out


def test_fig4_upper_monotone(capsys):
    code, out, _ = _run(["sweep", "--preset", "fig4"], capsys)
    assert code == 0
    rows = _rows(out)
    assert [r.value for r in rows] == list(range(91))
    upper = [r.p_upper for r in rows]
    assert all(b >= a for a, b in zip(upper, upper[1:]))


def test_fig8_mc_contains_mean(capsys):
    code, out, _ = _run(["sweep", "--preset", "fig8", "--seed", "0"], capsys)
    assert code == 0
    rows = _rows(out)
    assert len(rows) == 7
    for r in rows:
        assert r.seed == 0
        assert r.mc_ci_low <= r.p_mean <= r.mc_ci_high


def test_fig7_traces_level_off(capsys):
    code, out, _ = _run(["sweep", "--preset", "fig7"], capsys)
    assert code == 0
    traces = _traces(_rows(out))
    assert set(traces) == {"n_elements[theta_b=0]", "n_elements[theta_b=30]",
                           "n_elements[theta_b=60]"}
    for rows in traces.values():
        assert [r.value for r in rows] == list(range(1, 65))
        for col in ("a0", "p_mean", "p_upper"):
            last, prev = getattr(rows[-1], col), getattr(rows[-2], col)
            assert abs(last - prev) < 0.05 * abs(last)


def test_csv_header_and_empty_fields(capsys):
    _, out, _ = _run(["sweep", "--preset", "fig5"], capsys)
    lines = out.splitlines()
    assert lines[0] == ",".join(COLUMNS)
    # fig5 reports only a0: the remaining columns are empty
    assert lines[1].split(",")[3:] == [""] * 7


def test_csv_infinity_literal():
    spec = SweepSpec("rician_k", (1.0, math.inf), outputs=("p_upper",))
    text = to_csv(run_sweep(spec))
    assert text.splitlines()[2].startswith("rician_k,inf,")


@pytest.mark.parametrize("name", ["fig3", "fig4", "fig7", "fig8", "fig11"])
def test_csv_round_trip(name):
    text = to_csv(run_sweeps(preset(name, seed=1)))
    assert to_csv(_rows(text)) == text


def test_csv_round_trip_with_error_column():
    from ssop.sweep import SweepResult
    rows = [SweepResult("theta_b", 0.0, a0=4.1326), SweepResult("theta_b", 1.0, error="x")]
    text = to_csv(rows)
    assert text.splitlines()[0].endswith(",error")
    assert to_csv(_rows(text)) == text


def test_sweep_deterministic_across_threads():
    specs = preset("fig8", seed=2)
    assert to_csv(run_sweeps(specs, threads=1)) == to_csv(run_sweeps(specs, threads=4))


@pytest.mark.slow
def test_presets_complete_quickly():
    assert set(PRESETS) >= {f"fig{i}" for i in range(3, 12)}
    for name in PRESETS:
        start = time.perf_counter()
        rows = run_sweeps(preset(name))
        assert time.perf_counter() - start < 300
        assert rows and not any(r.error for r in rows)


def test_presets_listing(capsys):
    code, out, _ = _run(["presets"], capsys)
    assert code == 0 and out.split()[:2] == ["fig3", "fig4"]


def test_sweep_from_config_file(tmp_path, capsys):
    path = tmp_path / "run.ini"
    path.write_text(CONFIG)
    target = tmp_path / "out.csv"
    code, out, _ = _run(["sweep", "--config", str(path), "--out", str(target)], capsys)
    assert code == 0 and out == ""
    rows = _rows(target.read_text())
    assert [r.value for r in rows] == [0, 30, 60, 90]
    assert rows[0].a0 == pytest.approx(4.1326, abs=5e-4)
    assert all(r.eta == pytest.approx(1.0, abs=1e-9) for r in rows)


def test_config_overrides():
    parser = read_config(CONFIG, ["array.n_elements=4", "sweep.values=10,20",
                                  "mc.root_seed=5"])
    spec = sweep_from_config(parser, seed=None)
    assert spec.array.n_elements == 4
    assert spec.values == (10.0, 20.0)
    assert spec.mc.root_seed == 5
    assert sweep_from_config(parser, seed=8).mc.root_seed == 8


@pytest.mark.parametrize("override,field", [
    ("sweep.vary=bogus", "vary"),
    ("sweep.values=3,1,2", "values"),
    ("array.n_elements=zero", "array.n_elements"),
    ("system.pathloss_exp=9", "pathloss_exp"),
    ("sweep.outputs=p_mean,mc_estimate", "mc"),
])
def test_config_errors_name_the_field(override, field):
    with pytest.raises(ParameterError, match=field):
        sweep_from_config(read_config(CONFIG, [override]))


def test_usage_errors_exit_one(tmp_path, capsys):
    path = tmp_path / "run.ini"
    path.write_text(CONFIG)
    assert _run(["sweep", "--config", str(path), "--set", "sweep.vary=bogus"], capsys)[0] == 1
    assert _run(["sweep", "--config", str(tmp_path / "missing.ini")], capsys)[0] == 1
    assert _run(["sweep", "--preset", "fig4", "--threads", "0"], capsys)[0] == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--preset", "fig99"])
    assert exc.value.code == 1


def test_numerical_failure_exit_two(tmp_path, capsys, monkeypatch):
    from ssop import sweep

    def broken(cfg, params, spec):
        raise NumericalError("integrand is nan at node (3, 4)")

    monkeypatch.setattr(sweep, "ssop_mean", broken)
    path = tmp_path / "run.ini"
    path.write_text(CONFIG)
    code, out, err = _run(["sweep", "--config", str(path)], capsys)
    assert code == 2
    assert out.splitlines()[0].endswith(",error")
    assert "NumericalError" in out.splitlines()[1]
    assert "theta_b=0" in err


def test_selftest_passes(capsys):
    code, out, _ = _run(["selftest"], capsys)
    assert code == 0
    *checks, summary = out.splitlines()
    assert checks and all(line.startswith("PASS ") for line in checks)
    assert summary == f"{len(checks)} passed, 0 failed"
    modules = {line.split()[1].split("::")[0] for line in checks}
    assert modules >= {"special_functions", "array_geometry", "channel_model",
                       "exposure_region", "ssop_analytics", "mc_sim"}


def test_selftest_deterministic():
    assert selftest.run_selftest(3).text() == selftest.run_selftest(3).text()


def test_selftest_catches_corrupted_bessel(monkeypatch, capsys):
    coeffs = list(special_functions._HANKEL_COEFFS)
    coeffs[1] *= 1.5
    monkeypatch.setattr(special_functions, "_HANKEL_COEFFS", tuple(coeffs))
    code, out, _ = _run(["selftest"], capsys)
    assert code == 3
    failed = [line for line in out.splitlines() if line.startswith("FAIL ")]
    assert any("special_functions::" in line for line in failed)
    assert "observed=" in failed[0] and "expected=" in failed[0]


def test_contour(tmp_path, capsys):
    path = tmp_path / "c.ini"
    path.write_text("[array]\nn_elements = 8\n[system]\nrician_k = 5\n")
    code, out, err = _run(["contour", "--config", str(path), "--samples", "8", "--seed", "2"],
                          capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "theta_deg,radius_m" and len(lines) == 9
    assert [float(line.split(",")[0]) for line in lines[1:]] == [45.0 * i for i in range(8)]
    assert all(float(line.split(",")[1]) >= 0 for line in lines[1:])
    assert "reliability_radius_m=" in err
    again = _run(["contour", "--config", str(path), "--samples", "8", "--seed", "2"], capsys)
    assert again[1] == out


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "ssop.cli", "presets"], capture_output=True,
                         text=True)
    assert res.returncode == 0 and "fig8" in res.stdout


def test_config_inline_comments():
    parser = read_config("[sweep]\nvary = rician_k ; K sweep\nvalues = 1,2  # two points\n")
    spec = sweep_from_config(parser)
    assert spec.vary == "rician_k" and spec.values == (1.0, 2.0)
