import io
import json

import pytest

from galorb.cli import main


def run(argv, stdin=""):
    out = io.StringIO()
    code = main(argv, stdout=out, stdin=io.StringIO(stdin))
    return code, out.getvalue()


def tuple_json(y, Y=None, n=1, gram=None):
    d = n + 2
    return json.dumps({
        "n": n,
        "gram_tilde": gram or [["1" if i == j else "0" for j in range(n)] for i in range(n)],
        "Y": Y or [["0"] * d for _ in range(d)],
        "y": y,
    })


def kinds(payload):
    return [(s["kind"], s["index"]) for s in json.loads(payload)["summands"]]


def test_classify_stdin():
    code, out = run(["classify"], tuple_json(["0", "1", "0"]))
    assert code == 0
    assert kinds(out) == [("COTYPE_NONAFFINE_EPS", 0), ("TYPE_DELTA0_SIGN0", 0), ("TYPE_DELTA0_SIGN0", 1)]
    assert json.loads(out)["summands"][0]["moduli"] == {"alpha_sq": "1", "epsilon": "1"}


def test_classify_file(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(tuple_json(["0", "0", "0"]))
    code, out = run(["classify", "--in", str(path)])
    assert code == 0
    assert kinds(out) == [("COTYPE_AFFINE_NABLA2", 1), ("TYPE_DELTA0_SIGN0", 0)]


def test_classify_malformed_rational(capsys):
    bad = tuple_json(["0", "1", "0"], Y=[["0", "0", "0"], ["0", "0", "1/0"], ["0", "0", "0"]])
    code, out = run(["classify"], bad)
    assert code == 1 and out == ""
    assert "$.Y[1][2]" in capsys.readouterr().err


@pytest.mark.parametrize("text", ["{", "[]", "{}"])
def test_classify_malformed_json(text):
    assert run(["classify"], text)[0] == 1


def test_classify_missing_file(tmp_path):
    assert run(["classify", "--in", str(tmp_path / "nope.json")])[0] == 1


def test_classify_scope_error():
    # Isotropic middle part of y on an indefinite form.
    code, out = run(["classify"], tuple_json(["0", "1", "1", "0"], n=2, gram=[["1", "0"], ["0", "-1"]]))
    assert code == 2
    assert json.loads(out)["error"] == "AFFINE_SCOPE"


def test_act(tmp_path):
    g = {"n": 1, "gram_tilde": [["1"]], "P": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], "p": ["1", "0", "0"]}
    a = {"n": 1, "gram_tilde": [["1"]], "X": [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "-1"]], "x": ["0", "0", "0"]}
    (tmp_path / "g.json").write_text(json.dumps(g))
    (tmp_path / "a.json").write_text(json.dumps(a))
    code, out = run(["act", "--group", str(tmp_path / "g.json"), "--algebra", str(tmp_path / "a.json")])
    assert code == 0
    assert json.loads(out)["x"] == ["-1", "0", "0"]
    code, out = run(["act", "--twisted", "--group", str(tmp_path / "g.json"), "--algebra", str(tmp_path / "a.json")])
    assert code == 0 and json.loads(out)["x"] == ["0", "0", "0"]


def test_act_rejects_non_isometry(tmp_path):
    g = {"n": 1, "gram_tilde": [["1"]], "P": [["2", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], "p": ["0", "0", "0"]}
    a = {"n": 1, "gram_tilde": [["1"]], "X": [["0"] * 3] * 3, "x": ["0", "0", "0"]}
    (tmp_path / "g.json").write_text(json.dumps(g))
    (tmp_path / "a.json").write_text(json.dumps(a))
    assert run(["act", "--group", str(tmp_path / "g.json"), "--algebra", str(tmp_path / "a.json")])[0] == 1


def test_enumerate_n3():
    code, out = run(["enumerate", "--n", "3"])
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 16
    assert sum(r["in_paper"] for r in rows) == 15
    assert sorted(r["paper_row"] for r in rows if r["in_paper"]) == list(range(1, 16))


def test_enumerate_zero():
    code, out = run(["enumerate", "--dim", "0", "--index", "0"])
    rows = json.loads(out)["rows"]
    assert code == 0 and [s["kind"] for s in rows[0]["summands"]] == ["COTYPE_ZERO"] and len(rows) == 1


def test_enumerate_table():
    code, out = run(["enumerate", "--n", "3", "--table"])
    lines = out.splitlines()
    assert code == 0 and len(lines) == 18
    assert lines[2].startswith("1.") and lines[-1].startswith("*")


@pytest.mark.parametrize("argv", [
    ["enumerate", "--n", "3", "--dim", "5"],
    ["enumerate", "--dim", "5"],
    ["enumerate"],
    ["enumerate", "--n", "-1"],
    ["bogus"],
    [],
])
def test_enumerate_flag_errors(argv):
    assert run(argv)[0] == 1


def test_output_is_deterministic():
    assert run(["enumerate", "--n", "3"]) == run(["enumerate", "--n", "3"])
    t = tuple_json(["1", "2", "3"], Y=[["1", "0", "0"], ["0", "0", "0"], ["0", "0", "-1"]])
    assert run(["classify"], t) == run(["classify"], t)


def test_representative():
    code, out = run(["representative", "--atlas-row", "5", "--moduli", '{"y1": "2", "beta_sq": "1"}'])
    payload = json.loads(out)
    assert code == 0
    assert payload["tuple"]["y"] == ["2", "0", "0", "0", "0"]
    code2, back = run(["classify"], json.dumps(payload["tuple"]))
    assert code2 == 0 and json.loads(back) == payload["decomposition"]


def test_representative_errors():
    assert run(["representative", "--atlas-row", "99", "--moduli", "{}"])[0] == 1
    assert run(["representative", "--atlas-row", "5", "--moduli", "{"])[0] == 1
    assert run(["representative", "--atlas-row", "5", "--moduli", '{"y1": "1"}'])[0] == 1
    code, out = run(["representative", "--atlas-row", "9", "--moduli", '{"alpha_sq": "1", "beta_sq": "1"}'])
    assert code == 2 and json.loads(out)["error"] == "INDEX_MISMATCH"


def test_verify_atlas():
    code, out = run(["verify", "--seed", "42", "--trials", "3", "--suite", "atlas"])
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["suites"][0]["report"] == {
        "missing": [],
        "extra": ["nabla_0^-(0) + Delta_0(i beta,IP) + Delta_0(i beta,IP)"],
    }


def test_verify_unknown_suite():
    assert run(["verify", "--seed", "1", "--suite", "nope"])[0] == 1


def test_verify_seed_from_environment(monkeypatch):
    monkeypatch.setenv("GALORB_SEED", "9")
    code, out = run(["verify", "--trials", "2", "--suite", "witt"])
    assert code == 0 and json.loads(out)["seed"] == 9
    monkeypatch.delenv("GALORB_SEED")
    assert run(["verify", "--trials", "2", "--suite", "witt"])[0] == 1


def test_verify_is_deterministic():
    argv = ["verify", "--seed", "5", "--trials", "3", "--suite", "fact_b", "--suite", "invariance_affine"]
    assert run(argv) == run(argv)


def test_verify_reports_violations():
    # Round trips fail for the rows no admissible form can realize.
    code, out = run(["verify", "--seed", "1", "--trials", "1", "--suite", "roundtrip"])
    report = json.loads(out)
    assert code == 3 and not report["passed"]
    failed = report["suites"][0]["report"]["failed_rows"]
    assert {r["paper_row"] for r in failed if r["paper_row"]} == {9, 10, 12, 13}
