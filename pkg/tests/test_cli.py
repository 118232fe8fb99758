import json

import pytest

from ail.cli import run

from conftest import data_file

EX4 = "@example4.json"
LEFT = "@separation_pair.json#left"
RIGHT = "@separation_pair.json#right"


@pytest.fixture()
def bad_model(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "worlds": ["w", "v"],
        "agents": ["i"],
        "atoms": ["p"],
        "valuation": {},
        "ik": {"i": {"pairs": [["w", "v"]], "closed": True}},
        "awareness": {"i": {"w": [], "v": []}},
    }))
    return str(path)


MATRIX = [
    (["check", "-m", EX4, "-w", "w", "-f", "p4"], 0),
    (["check", "-m", EX4, "-w", "w", "-f", "E[b] p4"], 1),
    (["check", "-m", EX4, "-w", "w", "-f", "E[b] ("], 2),
    (["check", "-m", EX4, "-w", "w", "-f", "E[b] zz"], 2),
    (["check", "-m", "missing.json", "-w", "w", "-f", "p4"], 2),
    (["valid", "-m", EX4, "-f", "p2"], 0),
    (["valid", "-m", EX4, "-f", "p4"], 1),
    (["countermodel", "-f", "E[i] p -> p", "--max-worlds", "2"], 0),
    (["countermodel", "-f", "I[i] p & A[i] p -> E[i] p", "--max-worlds", "3"], 1),
    (["countermodel", "-f", "p", "--atoms", "q"], 2),
    (["--max-worlds", "0", "countermodel", "-f", "p"], 2),
    (["translate", "-f", "E[i] p"], 0),
    (["translate", "-f", "C[i] p"], 2),
    (["fh-check", "-m", EX4, "-w", "w", "-f", "E[b] p4"], 0),
    (["fh-check", "-m", EX4, "-w", "u", "-f", "p4"], 1),
    (["bisim", "-m1", LEFT, "-w1", "w", "-m2", RIGHT, "-w2", "w2"], 0),
    (["bisim", "-m1", LEFT, "-w1", "u", "-m2", RIGHT, "-w2", "w2"], 1),
    (["prove", "-p", data_file("proofs/gi_example.json")], 0),
    (["prove", "-p", data_file("proofs/bad_axiom.json")], 1),
    (["prove", "-p", data_file("proofs/bad_axiom.json"), "--infer-axiom"], 1),
    (["demo", "example4"], 0),
    (["demo", "nope"], 2),
    (["catalogue", "nope"], 2),
    (["frobnicate"], 2),
    ([], 2),
]


@pytest.mark.parametrize("argv, code", MATRIX, ids=[" ".join(a) or "empty" for a, _ in MATRIX])
def test_exit_codes(argv, code, capsys):
    assert run(argv) == code


def test_bad_model_is_an_input_error(bad_model, capsys):
    assert run(["check", "-m", bad_model, "-w", "w", "-f", "p"]) == 2
    assert "reflexive" in capsys.readouterr().err
    assert run(["--close-ik", "check", "-m", bad_model, "-w", "w", "-f", "~p"]) == 0


def test_check_prints_truth_value(capsys):
    run(["check", "-m", EX4, "-w", "w", "-f", "E[a] p4"])
    assert capsys.readouterr().out.strip() == "true"


def test_json_flag_in_either_position(capsys):
    run(["--json", "check", "-m", EX4, "-w", "w", "-f", "E[a] p4"])
    first = json.loads(capsys.readouterr().out)
    run(["check", "--json", "-m", EX4, "-w", "w", "-f", "E[a] p4"])
    second = json.loads(capsys.readouterr().out)
    assert first == second and first["value"] is True


def test_demo_table_ends_with_the_two_explicit_rows(capsys):
    run(["demo", "example4"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-2].endswith("E[a] p4: true")
    assert lines[-1].endswith("E[b] p4: false")


def test_countermodel_witness_is_json(capsys):
    run(["--json", "countermodel", "-f", "I[i] p & A[i] p -> E[i] p", "--max-worlds", "3"])
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "countermodel-found"
    assert len(out["witness"]["model"]["worlds"]) == 3


def test_translate_output(capsys):
    run(["translate", "-f", "E[i] p"])
    assert capsys.readouterr().out.strip() == "A[i] p & I[i] p"


def test_bisim_output(capsys):
    run(["bisim", "-m1", LEFT, "-w1", "w", "-m2", RIGHT, "-w2", "w2"])
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "bisimilar" and "w w2" in out[1:]


def test_prove_output(capsys):
    run(["prove", "-p", data_file("proofs/bad_axiom.json")])
    assert capsys.readouterr().out.startswith("rejected at line 1: not-an-instance")
