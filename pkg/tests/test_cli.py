import json

import pytest

from fwmindex.analysis.spectrum import parse
from fwmindex.cli import main


def _cfg(tmp_path, text):
    p = tmp_path / "c.yaml"
    p.write_text(text)
    return str(p)


def test_run_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "s.csv"
    cfg = _cfg(tmp_path, f"scenario: fig3_ideal_fwm\nengine: both\ngrid: {{start: -1, stop: 1, points: 21}}\noutput: {out}\n")
    assert main(["run", cfg]) == 0
    res = parse(out)
    assert len(res) == 21 and res.discrepancy is not None
    side = json.loads((tmp_path / "s.csv.analysis.json").read_text())
    assert side["metadata"]["engine"] == "both"


def test_run_is_byte_deterministic(tmp_path):
    cfg = _cfg(tmp_path, "scenario: fig6a_ideal_composite\ngrid: {start: -1, stop: 1, points: 51}\nformat: json\n")
    out = tmp_path / "a.json"
    main(["run", cfg, "-o", str(out)])
    first = out.read_bytes()
    main(["run", cfg, "-o", str(out)])
    assert out.read_bytes() == first


def test_config_error_exit_code(tmp_path, capsys):
    cfg = _cfg(tmp_path, "scenario: fig3_ideal_fwm\noverrides: {density: [1, 2]}\n")
    assert main(["run", cfg]) == 2
    assert "config error" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.yaml")]) == 2


def test_numerical_failure_exit_code(tmp_path):
    # optical decay below Gamma_r/2 is outside the model's domain
    cfg = _cfg(tmp_path, "scenario: fig3_ideal_fwm\noverrides: {optical_decay: 0.1, control_rabi: 0.1}\n")
    assert main(["run", cfg]) == 3


def test_sweep_and_optimize(tmp_path, capsys):
    cfg = _cfg(tmp_path, "scenario: fig3_ideal_fwm\ngrid: {start: -1, stop: 1, points: 201}\n")
    summary = tmp_path / "sw.json"
    assert main(["sweep", cfg, "--param", "control_rabi", "--values", "0.1", "0.3", "--summary", str(summary)]) == 0
    rows = json.loads(summary.read_text())["results"]
    assert [r["value"] for r in rows] == [0.1, 0.3]
    assert main(["optimize-omega", cfg]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rabi_optimum"]["control_rabi"] == pytest.approx(0.0904, rel=1e-2)


def test_optimize_rejects_scenario_without_control(tmp_path):
    cfg = _cfg(tmp_path, "scenario: fig1_raman_pair\n")
    assert main(["optimize-omega", cfg]) == 2


def test_validate_twice_identical(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["validate", "-o", str(a)]) == 0
    assert main(["validate", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
