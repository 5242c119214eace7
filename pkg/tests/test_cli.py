import json
import subprocess
import sys

import pytest

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from koszul_forge.cli import main
from koszul_forge.graphs import Graph
from koszul_forge.groups import GroupPresentation, GroupWord
from koszul_forge.free_algebra import parse_poly
from koszul_forge.quadratic import make_quadratic
from koszul_forge.schema import AlgebraPayload, GraphPayload, PresentationPayload
from strategies import random_algebra

REPORT_KEYS = {"command", "params", "verdict", "certificate", "series", "dual", "ext_table", "warnings"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


def test_dual_round_trip(capsys):
    payload = json.dumps({"p": 3, "d": 2, "relators": ["[X1,X2]"]})
    code, rep, _ = run_json(capsys, "dual", "--input", payload)
    assert code == 0 and REPORT_KEYS <= set(rep)
    code, back, _ = run_json(capsys, "dual", "--input", json.dumps(rep["dual"]))
    assert code == 0
    assert AlgebraPayload(**back["dual"]).build() == make_quadratic(3, 2, [parse_poly("[X1,X2]", 3, 2)])


def test_flags_and_payload_agree(capsys):
    _, a, _ = run_json(capsys, "hilbert", "--p", "3", "--d", "2", "--rel", "[X1,X2]", "--nmax", "5")
    _, b, _ = run_json(capsys, "hilbert", "-i", '{"p": 3, "d": 2, "relators": ["X1*X2 - X2*X1"]}', "--nmax", "5")
    assert a["series"] == b["series"] == [1, 2, 3, 4, 5, 6]


def test_input_from_file(tmp_path, capsys):
    path = tmp_path / "alg.json"
    path.write_text(json.dumps({"p": 2, "d": 2, "relators": []}))
    code, rep, _ = run_json(capsys, "hilbert", "--input", str(path), "--nmax", "3")
    assert code == 0 and rep["series"] == [1, 2, 4, 8]


def test_combine(capsys):
    payload = {"left": {"p": 3, "d": 1, "relators": []}, "right": {"p": 3, "d": 1, "relators": []}}
    code, rep, _ = run_json(capsys, "combine", "--kind", "tensor", "--input", json.dumps(payload))
    assert code == 0
    assert rep["algebra"]["relators"] == ["X1*X2 + 2*X2*X1"]


@pytest.mark.parametrize(
    "argv",
    [
        ["dual", "--p", "4", "--d", "2"],
        ["dual", "--input", '{"p": 3, "d": 2, "relators": ["X1"]}'],
        ["dual", "--input", '{"p": 3, "d": 2, "bogus": 1}'],
        ["dual", "--input", "{not json"],
        ["hilbert", "--p", "3", "--d", "2", "--rel", "X3*X1"],
        ["graph", "genraag", "--graph", "3; 1-2", "--p", "3", "--lambda", "1-2=2"],
    ],
)
def test_schema_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_budget_exit_3_with_partial_report(capsys):
    code, rep, err = run_json(
        capsys, "gb", "--p", "3", "--d", "2", "--rel", "X1*X2*X1 - X2*X1*X2", "--nmax", "12", "--max-rules", "3"
    )
    assert code == 3
    assert rep["warnings"] and "warning:" in err
    assert rep["partial"]["rules"] == 3
    assert rep["series"] == [1, 2, 4, 7, 12, 20, 33][: rep["partial"]["complete_up_to"] + 1]


def test_weight_bound_exit_3(capsys):
    code, _, err = run(capsys, "mild", "--p", "3", "--d", "1", "--rel", "x1^9")
    assert code == 3 and "weight" in err


def test_koszul_verdicts(capsys):
    code, rep, _ = run_json(capsys, "koszul", "--p", "3", "--d", "2", "--rel", "[X1,X2]")
    assert code == 0 and rep["verdict"] == "Certified" and rep["certificate"] == "PBW"
    rels = ["X1^2 + X2*X3 + X3*X2", "X1*X2 + X2*X1 + X2^2 + X2*X3 + X3*X1", "X1*X3 + X2*X1 + X3*X1 + X3*X2"]
    argv = ["koszul", "--p", "2", "--d", "3"] + [a for r in rels for a in ("--rel", r)]
    code, rep, _ = run_json(capsys, *argv)
    assert rep["verdict"] == "Refuted"
    assert rep["refutation"] == {"kind": "SeriesIdentityFailure", "degree": 4}


def test_seed_from_environment(capsys, monkeypatch):
    argv = ["koszul", "--p", "3", "--d", "5"] + [
        a for r in ["[X1,X2]", "[X2,X3]", "[X3,X4]", "[X4,X5]", "[X1,X5]"] for a in ("--rel", r)
    ]
    monkeypatch.setenv("KOSZUL_FORGE_SEED", "11")
    _, rep, _ = run_json(capsys, *argv, "--nmax", "5")
    assert rep["params"]["seed"] == 11
    _, again, _ = run_json(capsys, *argv, "--nmax", "5")
    assert rep == again
    _, flagged, _ = run_json(capsys, *argv, "--nmax", "5", "--seed", "2")
    assert flagged["params"]["seed"] == 2


def test_ext_command(capsys):
    code, rep, _ = run_json(capsys, "ext", "--p", "3", "--d", "2", "--rel", "X1^2", "--rel", "X2^2",
                            "--rel", "X1*X2 + X2*X1", "--imax", "3", "--jmax", "4")
    assert code == 0
    assert [rep["ext_table"][i][i] for i in range(4)] == [1, 2, 3, 4]


def test_group_analyze_and_warnings(capsys):
    code, rep, err = run_json(capsys, "group", "analyze", "--p", "2", "--d", "2", "--rel", "x1^2*[x1,x2]")
    assert code == 0
    assert rep["verdict"] == "Certified"
    assert any("p != 2" in w for w in rep["warnings"])
    assert "warning:" in err


def test_graph_commands(capsys):
    code, rep, _ = run_json(capsys, "graph", "raag", "--graph", "4; 1-2, 2-3, 3-4, 1-4", "--p", "3")
    assert code == 0
    assert rep["dual"]["relators"]
    code, rep, _ = run_json(capsys, "graph", "genraag", "--graph", "4; 1-2, 2-3, 3-4", "--p", "3",
                            "--lambda", "1-2=3", "--mu", "2-3=-3")
    assert code == 0


def test_demushkin_command(capsys):
    code, rep, _ = run_json(capsys, "demushkin", "--p", "2", "--d", "3")
    assert code == 0
    assert "X1^2 + X3*X2" in rep["dual"]["relators"]


def test_text_format_either_position(capsys):
    a = run(capsys, "--format", "text", "demushkin", "--p", "3", "--d", "2")[1]
    b = run(capsys, "demushkin", "--p", "3", "--d", "2", "--format", "text")[1]
    assert a == b and a.startswith("command")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "koszul_forge", "hilbert", "--p", "3", "--d", "1", "--nmax", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["series"] == [1, 1, 1, 1]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_algebra_payload_round_trip(seed):
    A = random_algebra(random.Random(seed))
    text = json.dumps(AlgebraPayload.of(A).model_dump())
    assert AlgebraPayload.model_validate(json.loads(text)).build() == A


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.tuples(st.integers(1, 3), st.integers(-3, 3)), max_size=4), max_size=3))
def test_presentation_payload_round_trip(words):
    G = GroupPresentation(3, 3, tuple(GroupWord(w) for w in words))
    text = json.dumps(PresentationPayload.of(G).model_dump())
    assert PresentationPayload.model_validate(json.loads(text)).build() == G


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(1, n), st.integers(1, n))))))
def test_graph_payload_round_trip(ne):
    n, pairs = ne
    G = Graph(n, [(a, b) for a, b in pairs if a != b])
    text = json.dumps(GraphPayload.of(G).model_dump())
    assert GraphPayload.model_validate(json.loads(text)).build() == G
    assert Graph.parse(G.format()) == G
