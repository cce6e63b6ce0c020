import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from blaschke_lab.classifier import ClassificationVerdict, Verdict
from blaschke_lab.cli import fmt, main, parse_complex

SPECS = {
    "identity": {"type": "identity"},
    "square": {"type": "blaschke", "zeros": [{"re": 0, "im": 0, "mult": 2}], "rotation": 0},
    "two": {"type": "blaschke", "zeros": [{"re": 0, "im": 0}, {"re": 0.5, "im": 0}], "rotation": 0},
    "affine": {"type": "affine", "scale": {"re": 0.5, "im": 0}, "offset": {"re": 0.5, "im": 0}},
    "atom": {"type": "atomic_singular", "atoms": [{"angle": 0, "mass": 1}]},
}


@pytest.fixture
def spec(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(SPECS[name]))
        return str(path)
    return write


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert float(fmt(1 / 3)) == 1 / 3
    assert fmt(math.inf) == "inf"
    assert fmt(None) == "nan"


def test_parse_complex():
    assert parse_complex("0.5+0i") == 0.5
    assert parse_complex("-0.2 - 0.3i") == -0.2 - 0.3j
    assert parse_complex("0.1j") == 0.1j


def test_evaluate_identity(spec):
    r = run("evaluate", "--map", spec("identity"), "--z", "0.5+0i")
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["value"] == {"re": 0.5, "im": 0.0}
    assert out["tau"] == 1.0
    assert out["one_minus_mod_sq"] == 0.75


def test_evaluate_blaschke_center(spec):
    out = json.loads(run("evaluate", "--map", spec("two"), "--z", "0+0i").output)
    assert out["value"] == {"re": 0.0, "im": 0.0}
    # B'(0) = 1/2 from the factor (1/2 - z)/(1 - z/2)
    assert out["derivative"]["re"] == 0.5
    assert out["tau"] == 0.5


def test_exit_codes(spec, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type":"blaschke","zeros":[{"re":0,"im":0},{"re":1.5,"im":0}]}')
    r = run("evaluate", "--map", bad, "--z", "0")
    assert r.exit_code == 2 and "zeros[1]" in r.output
    assert run("evaluate", "--map", tmp_path / "missing.json", "--z", "0").exit_code == 2
    assert run("evaluate", "--map", spec("identity"), "--z", "abc").exit_code == 2
    assert run("evaluate", "--map", spec("identity"), "--z", "1.2").exit_code == 3
    r = run("classify", "--map", spec("affine"), "--alpha", 1)
    assert r.exit_code == 4 and "AlphaExcluded" in r.output
    assert run("classify", "--map", spec("affine"), "--alpha", 2, "--gamma", 0.5).exit_code == 4
    assert run("classify", "--map", spec("affine"), "--alpha", 2, "--depth", 3).exit_code == 4


def test_distortion_field(spec):
    r = run("distortion-field", "--map", spec("square"), "--alpha", 1, "--radii", "0.3,0.9", "--angles", 1)
    table = rows(r.output)
    assert [list(t) for t in table][0] == ["re", "im", "tau", "jc_quotient"]
    for t in table:
        x = float(t["re"])
        assert float(t["tau"]) == pytest.approx(2 * x / (1 + x * x), rel=1e-12)
    ident = rows(run("distortion-field", "--map", spec("identity"), "--alpha", 2, "--radii", "0.2,0.7", "--angles", 5).output)
    assert len(ident) == 10 and {t["tau"] for t in ident} == {"1"}
    # radius-major order
    assert [float(t["re"]) ** 2 + float(t["im"]) ** 2 for t in ident][:5] == pytest.approx([0.04] * 5)
    r = run("distortion-field", "--map", spec("square"), "--alpha", 1, "--radii", "0.3,1.0", "--angles", 2)
    assert r.exit_code == 3


def test_classify_json_round_trip(spec):
    r = run("classify", "--map", spec("two"), "--alpha", 2, "--boundary-points", 16)
    assert r.exit_code == 0
    data = json.loads(r.output)
    assert data["label"] == "FiniteBlaschkeConsistent"
    v = ClassificationVerdict.from_dict(data)
    assert v.verdict is Verdict.FINITE_BLASCHKE_CONSISTENT
    assert v.c_estimate == pytest.approx(0.25)
    assert data["run_config"]["boundary_points"] == 16


def test_classify_rejection_is_exit_zero(spec):
    r = run("classify", "--map", spec("affine"), "--alpha", 2, "--boundary-points", 16, "--format", "csv")
    assert r.exit_code == 0
    table = rows(r.output)
    assert {t["verdict"] for t in table} == {"Rejected(LiminfFails)"}
    assert len(table) == 16


def test_alpha_sweep(spec):
    table = rows(run("alpha-sweep", "--map", spec("two"), "--alphas", "0.5,2,3", "--boundary-points", 16).output)
    assert [t["alpha"] for t in table] == ["0.5", "2", "3"]
    assert {t["verdict"] for t in table} == {"FiniteBlaschkeConsistent"}
    atom = rows(run("alpha-sweep", "--map", spec("atom"), "--alphas", "0.5,2").output)
    assert [t["verdict"] for t in atom] == ["Rejected(TauUnbounded)", "Rejected(LiminfFails)"]
    assert atom[0]["sup_tau"] == "unbounded"
    empty = run("alpha-sweep", "--map", spec("two"), "--alphas", "")
    assert empty.exit_code == 0 and empty.output == "alpha,c_estimate,sup_tau,verdict\n"
    assert run("alpha-sweep", "--map", spec("two"), "--alphas", "2,1").exit_code == 4


def test_boundary_scan(spec):
    ident = rows(run("boundary-scan", "--map", spec("identity"), "--alpha", 3, "--boundary-points", 4).output)
    assert [(t["liminf_tau_alpha"], t["limit_tau_alpha"], t["angular_derivative"]) for t in ident] == [("1", "1", "1")] * 4
    sq = rows(run("boundary-scan", "--map", spec("square"), "--alpha", 2, "--boundary-points", 4).output)
    for t in sq:
        assert float(t["liminf_tau_alpha"]) == pytest.approx(0.5, rel=1e-12)
        assert float(t["limit_tau_alpha"]) == pytest.approx(0.5, rel=1e-12)
        assert float(t["angular_derivative"]) == pytest.approx(2.0, rel=1e-12)
    two = rows(run("boundary-scan", "--map", spec("two"), "--alpha", 2, "--boundary-points", 2).output)
    assert float(two[0]["angular_derivative"]) == pytest.approx(4.0, rel=1e-8)
    assert float(two[0]["limit_tau_alpha"]) == pytest.approx(0.25, rel=1e-8)
    aff = rows(run("boundary-scan", "--map", spec("affine"), "--alpha", 2, "--boundary-points", 4).output)
    assert [t["angular_derivative"] for t in aff[1:]] == ["inf"] * 3


def test_out_file(spec, tmp_path):
    out = tmp_path / "scan.csv"
    r = run("boundary-scan", "--map", spec("square"), "--alpha", 2, "--boundary-points", 2, "--out", out)
    assert r.exit_code == 0 and r.output == ""
    assert out.read_text().startswith("angle,liminf_tau_alpha")
