import json
import subprocess
import sys
from pathlib import Path

import pytest

from cosserat_shell import cli
from cosserat_shell.config import ConfigError, load_config

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def records(out):
    return [json.loads(line) for line in (out / "report.jsonl").read_text().splitlines()]


def write(tmp_path, cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_plate_worked_value(tmp_path):
    assert cli.main(["energy", "--config", str(CONFIGS / "plate_worked.json"), "--out", str(tmp_path)]) == 0
    recs = records(tmp_path)
    assert recs[0]["w_curv_hom_plate"]["total"] == pytest.approx(4.0, abs=1e-12)
    assert all("config_hash" in r and "seed" in r for r in recs)
    assert (tmp_path / "tables" / "energy.csv").exists()


def test_zero_strain_report_all_zero(tmp_path):
    cfg = {"material": {}, "surface": {"type": "plane"},
           "energy": {"strains": [{"U": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "gamma": [[0] * 3] * 3, "E": [[0] * 3] * 3, "K": [[0] * 3] * 3}]}}
    assert cli.main(["energy", "--config", write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    rec = records(tmp_path)[0]
    for key in ("w_mp", "w_curv_gamma", "w_curv_alpha", "w_curv_devsym", "w_mp_hom", "w_curv_hom"):
        assert rec[key]["total"] == 0.0


def test_energy_default_config(tmp_path):
    assert cli.main(["energy", "--config", str(CONFIGS / "default.json"), "--out", str(tmp_path)]) == 0
    pts = [r for r in records(tmp_path) if r["kind"] == "point_energy"]
    assert len(pts) == 2 and all(r["w_curv_hom"]["total"] > 0 for r in pts)


@pytest.mark.parametrize("cfg, where", [
    ({"material": {}}, "surface"),
    ({"material": {"mu": -1.0}, "surface": {"type": "plane"}}, "material"),
    ({"material": {}, "surface": {"type": "plane"}, "thinlimit": {"h_list": [0.1, 0.2]}}, "thinlimit.h_list"),
    ({"material": {}, "surface": {"type": "plane"}, "bogus": 1}, "<root>"),
    ({"material": {}, "surface": {"type": "plane"}, "fields": {"a": {"generator": "product", "factors": ["zz"]}}}, "fields.a.factors"),
    ({"material": {}, "surface": {"type": "plane"}, "energy": {"rotation": "missing"}}, "energy.rotation"),
    ({"material": {}, "surface": {"type": "graph", "expression": "x1 + q"}}, "surface"),
])
def test_config_errors_name_the_field(tmp_path, cfg, where, capsys):
    assert cli.main(["energy", "--config", write(tmp_path, cfg), "--out", str(tmp_path)]) == 2
    assert where in capsys.readouterr().err
    with pytest.raises(ConfigError, match=where.replace("<", "\\<")):
        load_config(cfg)


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{\"material\": ")
    assert cli.main(["verify", "--config", str(p), "--out", str(tmp_path)]) == 2


def test_missing_file(tmp_path):
    assert cli.main(["verify", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2


def test_verify_small_run_passes(tmp_path):
    assert cli.main(["verify", "--config", str(CONFIGS / "default.json"), "--instances", "50", "--out", str(tmp_path)]) == 0
    summary = records(tmp_path)[-1]
    assert summary["kind"] == "summary" and summary["passed"]


def test_mutation_hook_fails(tmp_path):
    assert cli.main(["verify", "--config", str(CONFIGS / "mutation.json"), "--instances", "20", "--out", str(tmp_path)]) == 1
    failed = records(tmp_path)[-1]["failed"]
    assert "o4_curvature" in failed and "nye" not in failed


def test_degenerate_parameters_fail_verification(tmp_path):
    assert cli.main(["verify", "--config", str(CONFIGS / "degenerate.json"), "--instances", "20", "--out", str(tmp_path)]) == 1
    suite = [r for r in records(tmp_path) if r.get("suite") == "configured_material"][0]
    assert "degenerate" in suite["details"]["error"]


def test_thinlimit_trivial_table(tmp_path):
    cfg = {"material": {}, "surface": {"type": "plane"}, "thinlimit": {"family": "trivial", "h_list": [0.2, 0.1, 0.05, 0.025]}}
    assert cli.main(["thinlimit", "--config", write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    rows = [r for r in records(tmp_path) if r["kind"] == "convergence_row"]
    assert len(rows) == 4 and all(r["energy"] == 0.0 and r["abs_err"] == 0.0 for r in rows)
    header = (tmp_path / "tables" / "thinlimit.csv").read_text().splitlines()[0]
    assert header == "h,energy,limit,abs_err,rate"


def test_report_schema(capsys):
    assert cli.main(["report-schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert set(schema["required"]) == {"material", "surface"}


def test_float_format_round_trips():
    x = 0.1 + 0.2
    assert float(json.loads(cli.dumps({"x": x}))["x"]) == x
    assert cli.dumps([float("nan"), True, 3]) == "[null,true,3]"


def test_determinism_and_overrides(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["verify", "--config", str(CONFIGS / "default.json"), "--instances", "30", "--seed", "7"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    assert (a / "report.jsonl").read_bytes() == (b / "report.jsonl").read_bytes()
    assert records(a)[0]["seed"] == 7


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "cosserat_shell.cli", "report-schema"], capture_output=True, text=True)
    assert r.returncode == 0 and "material" in r.stdout
