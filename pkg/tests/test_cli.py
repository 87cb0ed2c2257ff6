import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from charp_diffops import cli
from charp_diffops.cli import EXIT_ERROR, EXIT_FAILED, EXIT_OK, EXIT_SINGULAR, run

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
GOLDEN = Path(__file__).resolve().parent / "golden"
sys.path.insert(0, str(Path(__file__).resolve().parent))
from make_golden import report_for  # noqa: E402


def invoke(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
    try:
        code = run([str(a) for a in argv], stdout=out, stderr=err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def write_spec(tmp_path, **spec):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    return path


@pytest.mark.parametrize("spec", sorted(p.name for p in SPECS.glob("*.json")))
def test_golden_reports(spec):
    code, text = report_for(SPECS / spec)
    assert text == (GOLDEN / spec).read_text(encoding="utf-8")
    assert code == (EXIT_SINGULAR if spec == "cusp.json" else EXIT_OK)


def test_analyze_circle():
    code, out, _ = invoke(SPECS / "circle.json", "--analyze")
    rep = json.loads(out)["analyze"]
    assert code == EXIT_OK
    assert (rep["r"], rep["regular"], rep["Ir"], rep["Jr"], rep["Jr1"]) == (1, True, [[1]], [[1], [2]], [[1, 2]])


def test_analyze_cusp_is_singular():
    code, out, _ = invoke(SPECS / "cusp.json")
    assert code == EXIT_SINGULAR
    rep = json.loads(out)
    assert rep["analyze"]["regular"] is False and rep["assumed_prime"] is True


def test_non_prime_is_an_error(tmp_path):
    code, out, err = invoke(write_spec(tmp_path, p=4, vars=["x1"], ideal=[]))
    assert code == EXIT_ERROR and out == ""
    assert "p must be prime" in err


@pytest.mark.parametrize("spec,needle", [
    ({"p": 5, "vars": ["x1", "x2"], "ideal": ["x1 + * x2"]}, "position"),
    ({"p": 5, "vars": ["x1"], "ideal": ["x2"]}, "x2"),
    ({"p": 5, "vars": ["x1"], "ideal": [], "colour": 1}, "colour"),
    ({"p": 5, "vars": ["x1"], "ideal": [], "order": "weird"}, "weird"),
    ({"p": 5, "vars": ["x1"], "ideal": ["1"]}, "unit ideal"),
])
def test_bad_specs(tmp_path, spec, needle):
    code, out, err = invoke(write_spec(tmp_path, **spec))
    assert code == EXIT_ERROR
    assert needle in err


def test_missing_file_and_bad_flags(tmp_path):
    assert invoke(tmp_path / "nope.json")[0] == EXIT_ERROR
    assert invoke(SPECS / "circle.json", "--nu", "x")[0] == EXIT_ERROR
    assert invoke(SPECS / "circle.json", "--base", "2;1")[0] == EXIT_ERROR


def test_ders_examples():
    rep = json.loads(invoke(SPECS / "circle.json", "--ders")[1])["ders"]
    assert [g["coeffs"] for g in rep["generators"]] == [["-2*x2", "2*x1"]]
    assert rep["derel"]["pass"] and rep["derel"]["count"] == 2
    q = rep["membership"]["queries"]
    assert q[0]["member"] and q[0]["round_trip"] and q[0]["values"] == {"x2": "-x1"}
    rep = json.loads(invoke(SPECS / "affine.json", "--ders")[1])["ders"]
    assert [g["text"] for g in rep["generators"]] == ["∂1", "∂2"]
    rep = json.loads(invoke(SPECS / "twisted.json", "--ders")[1])["ders"]
    assert rep["generators"][0]["coeffs"] == ["1", "2*x1", "-2*x2"]


def test_hs_examples(tmp_path):
    rep = json.loads(invoke(SPECS / "circle.json", "--hs", "--base", "1;1", "--nu", "2")[1])["hs"]
    fam = rep["families"]["x2"]
    assert fam["images"]["x1"][:3] == ["x1", "-2*x2/Δ", "1/Δ^3"]
    assert fam["hom_validate"] and fam["nilpotent"] and fam["extdix_agrees"]
    rep = json.loads(invoke(SPECS / "hyper.json", "--hs")[1])["hs"]
    assert all(f["extdix_agrees"] for f in rep["families"].values())
    spec = json.loads((SPECS / "circle.json").read_text())
    spec["N"] = 0
    code, out, _ = invoke(write_spec(tmp_path, **spec), "--hs")
    fam = json.loads(out)["hs"]["families"]["x2"]
    assert code == EXIT_OK and fam["images"] == {"x1": ["x1"], "x2": ["x2"]}


def test_dops_examples():
    code, out, _ = invoke(SPECS / "circle.json", "--dops")
    rep = json.loads(out)["dops"]
    assert code == EXIT_OK
    assert rep["schedule"]["m"][:2] == [0, 1] and rep["schedule"]["n"][1] == rep["schedule"]["M"]
    assert rep["rpC"]["pass"] and rep["R1_R4"]["pass"]
    assert all(r["pass"] for r in rep["R5"]["by_sigma"].values())
    rep = json.loads(invoke(SPECS / "affine.json", "--dops")[1])["dops"]
    assert rep["rpC"]["pass"] and rep["R1_R4"]["pass"]
    code, out, _ = invoke(SPECS / "cusp.json", "--dops")
    rep = json.loads(out)["dops"]
    assert code == EXIT_SINGULAR
    assert rep["relations"].startswith("skipped")
    assert all(c["pass"] for c in rep["jacobian_invariance"]["checks"])


@pytest.mark.parametrize("expr,want", [("D1 * x1", "x1*D1 + 1"), ("D1^5", "0"), ("x1 + x1", "2*x1")])
def test_weyl_calculator(expr, want):
    code, out, _ = invoke(SPECS / "circle.json", "--weyl", expr)
    assert code == EXIT_OK
    assert json.loads(out)["weyl"]["normal_form"] == want


def test_weyl_parse_error():
    code, _, err = invoke(SPECS / "circle.json", "--weyl", "D1 +")
    assert code == EXIT_ERROR and "error" in err


def test_verification_failure_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "hom_validate", lambda H: False)
    assert invoke(SPECS / "circle.json", "--hs")[0] == EXIT_FAILED
    # a failing check outranks the singular verdict
    assert invoke(SPECS / "cusp.json", "--hs")[0] == EXIT_FAILED


def test_stdin_and_json_out(tmp_path):
    target = tmp_path / "report.json"
    text = (SPECS / "circle.json").read_text()
    code, out, _ = invoke("-", "--analyze", "--json-out", target, stdin=text)
    assert code == EXIT_OK and target.read_text(encoding="utf-8") == out


def test_thread_count_does_not_change_report(monkeypatch):
    base = invoke(SPECS / "twisted.json", "--dops")[1]
    monkeypatch.setenv("CHARP_DIFFOPS_THREADS", "4")
    assert cli.threads_from_env() == 4
    assert invoke(SPECS / "twisted.json", "--dops")[1] == base


def test_timing_goes_to_stderr():
    _, out, err = invoke(SPECS / "circle.json", "--analyze")
    assert "total" in err and "total" not in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "charp_diffops", str(SPECS / "cusp.json"), "--analyze"],
        capture_output=True, text=True, encoding="utf-8",
    )
    assert proc.returncode == EXIT_SINGULAR
    assert json.loads(proc.stdout)["analyze"]["r"] == 1
