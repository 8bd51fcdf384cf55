import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from marclab.cli import main, parse_range
from marclab.noncompactness import AltCertificate, GeneralLowerCertificate, LinfCertificate, translated_family
from marclab.phi import PowerLogPhi
from marclab.reporting import dumps
from marclab.stepfn import StepFunction

SQRT = PowerLogPhi(0.5)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


@pytest.fixture
def f_json(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(dumps(StepFunction.from_values([3, 1], [F(1, 4), F(1, 2)], L=1)))
    return str(path)


def test_parse_range():
    assert parse_range("2..5") == [2, 3, 4, 5]
    assert parse_range("3") == [3]


def test_norm_command(f_json, capsys):
    code, out = run(["norm", "--phi", "power_log:0.5,0,1", "--f", f_json], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["m"]["value"] == pytest.approx(1.5) and doc["M"]["value"] == pytest.approx(1.5)


def test_rearrange_command(f_json, capsys):
    code, out = run(["rearrange", "--f", f_json, "--at", "1/4"], capsys)
    doc = json.loads(out.out)
    assert doc["points"][0]["fstar"] == 1 and doc["points"][0]["fstar_left"] == 3


def test_phi_command(capsys):
    code, out = run(["phi", "--phi", "power_log:2,0,1", "--at", "0.5"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["majorant"][0][1] == pytest.approx(0.5)


def test_superadd_csv_and_svg(tmp_path, capsys):
    svg = tmp_path / "d.svg"
    code, out = run(["superadd", "--case", "M", "--phi", "power_log:0.5,0,1", "--m", "2..16", "--gamma", "1",
                     "--svg", str(svg)], capsys)
    lines = out.out.splitlines()
    assert code == 0 and lines[0] == "m,gamma,sum_norm,defect" and len(lines) == 16
    defects = [float(line.split(",")[3]) for line in lines[1:]]
    assert all(b >= a for a, b in zip(defects, defects[1:]))
    assert svg.read_text().startswith("<svg")


def test_superadd_refusal_is_usage_error(capsys):
    code, out = run(["superadd", "--case", "M", "--phi", "power_log:1,0,1"], capsys)
    assert code == 2 and "positive and finite" in out.err


def test_pack_command(capsys):
    code, out = run(["pack", "--n", "1", "--t1", "1/5"], capsys)
    doc = json.loads(out.out)
    assert code == 0 and doc["packing"]["m"] == 4 and doc["report"]["ok"]


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(dumps(obj))
    return str(p)


def test_certify_general_pass_and_fail(tmp_path, capsys):
    good = GeneralLowerCertificate("M_phi", "1/2", "1", 1.0, 1.0, SQRT, "indicator_packing", {})
    bad = GeneralLowerCertificate("M_phi", "1/2", "1", 1.0, 1.0, SQRT, "indicator_packing", {"x_norm": 1.1})
    code, out = run(["certify", "general", "--cert", _write(tmp_path, "g.json", good), "--kmax", "8"], capsys)
    assert code == 0 and json.loads(out.out)["verdict"] == "PASS"
    code, out = run(["certify", "general", "--cert", _write(tmp_path, "b.json", bad)], capsys)
    doc = json.loads(out.out)
    assert code == 1 and doc["failed_condition"]["name"] == "unit_ball" and doc["schema_version"] == 1


def test_certify_alt_and_linf(tmp_path, capsys):
    fam = translated_family(StepFunction.indicator(0, F(1, 100), 1, L=1), 4, F(1, 50))
    alt = AltCertificate("m_phi", 1e-4, 1.0, F(1, 100), fam, PowerLogPhi(2.0))
    code, _ = run(["certify", "alt", "--cert", _write(tmp_path, "a.json", alt)], capsys)
    assert code == 0
    members = tuple(StepFunction.indicator(F(i, 4), F(i + 1, 4), F(19, 20), L=1) for i in range(4))
    lin = LinfCertificate(F(19, 20), members, (1.0,) * 4, uniform_pair_bound=1.0)
    code, out = run(["certify", "linf", "--cert", _write(tmp_path, "l.json", lin)], capsys)
    assert code == 1 and json.loads(out.out)["failed_condition"]["name"] == "sup_norm"


def test_witness_params_command(capsys):
    code, out = run(["witness-params", "--case", "m", "--phi", "power_log:0.5,0,1", "--lam", "0.9",
                     "--centers", "3"], capsys)
    assert code == 0 and json.loads(out.out)["ok"]


def test_usage_and_schema_errors(tmp_path, capsys):
    assert run(["bogus"], capsys)[0] == 2
    assert run(["norm", "--phi", "nope", "--f", "x.json"], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  oops")
    code, out = run(["certify", "general", "--cert", str(bad)], capsys)
    assert code == 2 and "line 2" in out.err
    code, out = run(["certify", "general", "--cert", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and "missing.json" in out.err
    assert run(["superadd", "--case", "m", "--phi", "power_log:0.5,0,1", "--m", "0..2"], capsys)[0] == 2


def test_tolerance_environment_variable(monkeypatch, capsys):
    monkeypatch.setenv("MARCLAB_TOL", "oops")
    assert run(["pack", "--n", "1", "--t1", "1/5"], capsys)[0] == 2


def test_out_flag_writes_file(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert run(["inequalities", "--trials", "3", "--seed", "1", "--out", str(out)], capsys)[0] == 0
    assert json.loads(out.read_text())["failures"] == 0


def test_byte_identical_runs_across_processes(tmp_path):
    cmds = [["inequalities", "--trials", "20", "--seed", "7"],
            ["superadd", "--case", "m", "--phi", "power_log:0.5,0,1", "--m", "2..8", "--gamma", "0.5,1,2"]]
    for cmd in cmds:
        outs = [subprocess.run([sys.executable, "-m", "marclab.cli", *cmd], capture_output=True, check=True).stdout
                for _ in range(2)]
        assert outs[0] == outs[1] and outs[0]
