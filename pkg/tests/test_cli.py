import json
import subprocess
import sys

import pytest

from suspsplit.catalog import parse_wedge
from suspsplit.cli import (
    SchemaError,
    document_from_input,
    input_from_document,
    run,
    validate_document,
)
from suspsplit.oracle import EnumerationBounds, enumerate_inputs

N5 = {"schema": 1, "n": 5, "l": 1, "d": 1, "torsion": [[3, 1]]}
N2_ATTACH = {"schema": 1, "n": 2, "l": 1, "d": 0, "torsion": [[2, 2]], "mode": "attach",
             "coeffs": {"x": [1], "eps": [1], "y": [1], "z": [0], "s": [1]}}
N2_OPS = {"schema": 1, "n": 2, "l": 1, "d": 1, "torsion": [],
          "profile": {"w2": False, "theta": {"case": "trivial"}}}


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="in.json"):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return _write


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_n5(capsys, write):
    code, out, _ = call(capsys, "decompose", "--n", "5", "-f", write(N5))
    assert code == 0
    assert parse_wedge(out.strip()) == parse_wedge(
        "S^6 + S^7 + S^8 + S^13 + P^7(Z/3) + P^8(Z/3)")


def test_tables_lookup(capsys):
    code, out, _ = call(capsys, "tables", "--pi", "6", "--space", "C^5_eta")
    assert code == 0 and out.strip() == "Z/6<i3*nu'>"
    code, out, _ = call(capsys, "tables", "--pi", "6", "--space", "C^5_eta", "--json")
    assert json.loads(out)["orders"] == [6]


def test_n3_without_localization_is_a_domain_error(capsys, write):
    doc = {"schema": 1, "n": 3, "l": 0, "d": 0, "torsion": [], "localize": False}
    code, _, err = call(capsys, "decompose", "-f", write(doc))
    assert code == 3 and "inverting 2" in err
    code, _, _ = call(capsys, "decompose", "-f", write(doc), "--localize")
    assert code == 0


def test_json_output_mirrors_the_wedge(capsys, write):
    code, out, _ = call(capsys, "decompose", "-f", write(N2_OPS), "--json")
    payload = json.loads(out)
    assert code == 0
    assert parse_wedge(payload["wedge"]) == parse_wedge("S^3 + S^4 + S^5 + S^7")
    assert [a["condition"] for a in payload["alternatives"]] == \
        ["epsilon=1: tertiary operation nontrivial"]
    assert payload["section"] == {"c1": 0, "c2": 0, "chosen": []}
    assert {"case", "localized", "terms"} <= payload.keys()


@pytest.mark.parametrize("doc", [
    {**N5, "extra": 1},
    {**N5, "schema": 2},
    {**N5, "n": 6},
    {**N5, "torsion": [[4, 1]]},
    {**N2_ATTACH, "coeffs": {"q": [1]}},
    "{not json",
    [1, 2],
])
def test_schema_errors_exit_2(capsys, write, doc):
    code, _, err = call(capsys, "decompose", "-f", write(doc))
    assert code == 2 and "schema error" in err


def test_other_usage_errors_exit_2(capsys, write):
    assert call(capsys, "decompose")[0] == 2
    assert call(capsys, "decompose", "-f", "/nonexistent/in.json")[0] == 2
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "decompose", "--n", "2", "-f", write(N5))[0] == 2
    assert call(capsys, "enumerate", "--bounds", "1,2")[0] == 2
    assert call(capsys, "tables", "--pi", "6")[0] == 2


def test_domain_errors_exit_3(capsys, write):
    bad = {**N2_OPS, "profile": {"w2": False, "theta": {"case": "bockstein_image", "r": 3}}}
    assert call(capsys, "decompose", "-f", write(bad))[0] == 3
    assert call(capsys, "tables", "--pi", "8", "--space", "P^5(Z/2)")[0] == 3
    short = {**N2_ATTACH, "coeffs": {"y": [1, 1]}}
    assert call(capsys, "decompose", "-f", write(short))[0] == 3


def test_normalize_prints_the_trace(capsys, write):
    code, out, _ = call(capsys, "normalize", "-f", write(N2_ATTACH), "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["trace"] and payload["normal_form"] != payload["input"]
    assert "teta" in payload["cofiber"]
    code, out, _ = call(capsys, "normalize", "-f", write(N2_ATTACH))
    assert out.splitlines()[2].startswith("trace: ")
    assert call(capsys, "normalize", "-f", write(N2_OPS))[0] == 3


def test_verify_single_input(capsys, write):
    code, out, _ = call(capsys, "verify", "-f", write(N2_ATTACH))
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()[-3:]] == ["PASS"] * 3
    code, out, _ = call(capsys, "verify", "-f", write(N2_ATTACH), "--depth", "0")
    assert code == 1 and "FAIL orbit search (depth 0)" in out


def test_verify_sweep(capsys):
    code, out, _ = call(capsys, "verify", "--bounds", "1,1,1,1", "--json")
    reports = json.loads(out)
    assert code == 0 and all(r["passed"] for r in reports)
    assert {r["name"] for r in reports} >= {"homology (ops)", "homology (attach)",
                                            "mode agreement", "confluence n=2"}


def test_enumerate_count_and_lines(capsys):
    code, out, _ = call(capsys, "enumerate", "--bounds", "1,0,1,1", "--count")
    assert code == 0
    n = int(out)
    code, out, _ = call(capsys, "enumerate", "--bounds", "1,0,1,1")
    lines = out.splitlines()
    assert len(lines) == n
    docs = [json.loads(x) for x in lines]
    for doc in docs:
        validate_document(doc)
    want = list(enumerate_inputs(EnumerationBounds(1, 0, 1, 1)))
    assert [input_from_document(d) for d in docs] == want


def test_enumerate_cap(capsys, monkeypatch):
    monkeypatch.setenv("SUSPSPLIT_CAP", "5")
    assert call(capsys, "enumerate", "--bounds", "1,1,1,2")[0] == 3


def test_document_round_trip():
    inp = input_from_document(N2_ATTACH)
    assert input_from_document(document_from_input(inp)) == inp
    with pytest.raises(SchemaError):
        validate_document({"schema": 1})


def test_stdin_and_byte_stability(write):
    cmd = [sys.executable, "-m", "suspsplit", "decompose", "-f", "-", "--json"]
    text = json.dumps(N2_OPS)
    runs = [subprocess.run(cmd, input=text, capture_output=True, text=True) for _ in range(2)]
    assert runs[0].returncode == 0
    assert runs[0].stdout == runs[1].stdout
    assert json.loads(runs[0].stdout)["case"] == "theta_trivial"
