"""End-to-end CLI runs: subcommands, formats, exit codes."""

import json
import os
import subprocess
import sys

import pytest

DERIVATOR = {
    "T": 3.0,
    "g0": 0.0,
    "pieces": [{"from": 0.0, "to": 3.0, "density": {"kind": "const", "value": 1.0}}],
    "jumps": [{"t": 1.0, "d": 0.5}],
}


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env.pop("STIELTJES_FAULTS", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "stieltjes", *args],
                          capture_output=True, text=True, env=env, timeout=300)


def write_config(tmp_path, problem, name="cfg.json", **extra):
    doc = {"derivator": DERIVATOR, "problem": problem, "grid_n": 64}
    doc.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_integrate_of_one_is_the_measure(tmp_path):
    cfg = write_config(tmp_path, {"f": {"kind": "const", "value": 1.0}})
    proc = run_cli("integrate", "--config", cfg)
    assert proc.returncode == 0
    last = proc.stdout.strip().splitlines()[-1].split(",")
    assert float(last[0]) == 3.0
    assert float(last[1]) == pytest.approx(3.5, abs=1e-9)


def test_csv_output_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path, {
        "P": {"kind": "const", "value": 1.0},
        "Q": {"kind": "const", "value": 1.25},
        "f": {"kind": "const", "value": 0.5},
        "x0": [1.0, 0.0], "v0": [0.0, 0.0],
    })
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert run_cli("solve2", "--config", cfg, "--out", out1).returncode == 0
    assert run_cli("solve2", "--config", cfg, "--out", out2).returncode == 0
    with open(out1, "rb") as f1, open(out2, "rb") as f2:
        assert f1.read() == f2.read()


def test_solve2_reports_method_and_residual(tmp_path):
    cfg = write_config(tmp_path, {
        "P": {"kind": "const", "value": 2.0},
        "Q": {"kind": "const", "value": 1.0},
        "f": {"kind": "const", "value": 0.0},
        "x0": [1.0, 0.0], "v0": [0.0, 0.0],
    })
    proc = run_cli("solve2", "--config", cfg)
    assert proc.returncode == 0
    header = proc.stdout.splitlines()[0]
    assert header.startswith("#")
    assert "method=closed-form-double" in header
    assert "max_residual=" in header
    # residual column stays at zero for the analytic bundle
    for line in proc.stdout.splitlines()[2:]:
        assert float(line.split(",")[-1]) < 1e-9


def test_solve2_piecewise_P_with_zero_Q(tmp_path):
    cfg = write_config(tmp_path, {
        "P": {"kind": "piecewise-const", "breaks": [1.5], "values": [1.0, 2.0]},
        "Q": {"kind": "const", "value": 0.0},
        "f": {"kind": "const", "value": 0.5},
        "x0": [0.0, 0.0], "v0": [1.0, 0.0],
    })
    proc = run_cli("solve2", "--config", cfg)
    assert proc.returncode == 0
    assert "method=first-order" in proc.stdout.splitlines()[0]


def test_solve2_rejects_general_variable_coefficients(tmp_path):
    cfg = write_config(tmp_path, {
        "P": {"kind": "const", "value": 1.0},
        "Q": {"kind": "piecewise-const", "breaks": [1.5], "values": [1.0, 2.0]},
        "f": {"kind": "const", "value": 0.0},
        "x0": [1.0, 0.0], "v0": [0.0, 0.0],
    })
    proc = run_cli("solve2", "--config", cfg)
    assert proc.returncode == 2


def test_gexp_json_format(tmp_path):
    cfg = write_config(tmp_path, {"p": {"kind": "const", "value": [0.0, 1.0]}})
    proc = run_cli("gexp", "--config", cfg, "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["columns"] == ["t", "exp_g"]
    t0 = doc["rows"][0]
    assert t0[0] == 0.0 and t0[1] == [1.0, 0.0]


def test_wronskian_columns(tmp_path):
    cfg = write_config(tmp_path, {"P": {"kind": "const", "value": 1.0},
                                  "Q": {"kind": "const", "value": 1.25}})
    proc = run_cli("wronskian", "--config", cfg)
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert "max_relation_residual" in lines[0]
    assert lines[1].split(",")[:2] == ["t", "Re Wtilde"]


def test_helmholtz_one_block_per_delta(tmp_path):
    path = tmp_path / "h.json"
    path.write_text(json.dumps({
        "problem": {"w1": 1.0, "w2": 2.0, "t1": 1.0,
                    "x0": [1.0, 0.0], "v0": [0.0, 0.0], "T": 3.0},
        "grid_n": 32,
    }))
    proc = run_cli("helmholtz", "--config", str(path), "--delta", "0,0.2,0.4")
    assert proc.returncode == 0
    headers = [l for l in proc.stdout.splitlines() if l.startswith("# delta=")]
    assert len(headers) == 3
    assert headers[0].startswith("# delta=0.0")


def test_verify_quick_passes():
    proc = run_cli("verify", "--level", "quick")
    assert proc.returncode == 0
    assert "suites passed" in proc.stdout
    assert "FAIL" not in proc.stdout


def test_verify_report_written(tmp_path):
    out = str(tmp_path / "report.csv")
    proc = run_cli("verify", "--level", "quick", "--out", out)
    assert proc.returncode == 0
    with open(out) as fh:
        lines = fh.read().splitlines()
    assert lines[0].startswith("suite,")
    assert len(lines) == 11


# -- exit codes --------------------------------------------------------------


def test_malformed_json_exits_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"derivator": nope}')
    assert run_cli("integrate", "--config", str(path)).returncode == 2


def test_missing_config_exits_2(tmp_path):
    assert run_cli("integrate", "--config", str(tmp_path / "absent.json")).returncode == 2


def test_invalid_derivator_exits_2(tmp_path):
    doc = {"derivator": dict(DERIVATOR, jumps=[{"t": 0.0, "d": 0.5}]),
           "problem": {"f": {"kind": "const", "value": 1.0}}}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    proc = run_cli("integrate", "--config", str(path))
    assert proc.returncode == 2
    assert "D_g" in proc.stderr


def test_tiny_grid_exits_2(tmp_path):
    cfg = write_config(tmp_path, {"f": {"kind": "const", "value": 1.0}})
    assert run_cli("integrate", "--config", cfg, "--grid-n", "4").returncode == 2


def test_nonfinite_sample_exits_3(tmp_path):
    cfg = write_config(tmp_path, {"f": {"kind": "const", "value": float("nan")}})
    proc = run_cli("integrate", "--config", cfg)
    assert proc.returncode == 3
    assert "numeric error" in proc.stderr


def test_regressivity_violation_exits_4(tmp_path):
    cfg = write_config(tmp_path, {"p": {"kind": "const", "value": -2.0}})
    proc = run_cli("gexp", "--config", cfg)
    assert proc.returncode == 4
    assert "precondition" in proc.stderr


def test_unwritable_output_exits_5(tmp_path):
    cfg = write_config(tmp_path, {"f": {"kind": "const", "value": 1.0}})
    proc = run_cli("integrate", "--config", cfg, "--out", "/nonexistent-dir/out.csv")
    assert proc.returncode == 5


def test_seeded_fault_fails_verification():
    proc = run_cli("verify", "--level", "quick",
                   env_extra={"STIELTJES_FAULTS": "c1-sign"})
    assert proc.returncode == 1
    assert "particular-solution residual" in proc.stdout
