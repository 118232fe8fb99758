import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ail.checker import VALID_UP_TO_BOUND, SearchBounds, find_countermodel, model_valid
from ail.model import random_model
from ail.proof import (
    AXIOMS,
    CapacityError,
    Proof,
    canonical_axiom,
    check_proof,
    instantiate_axiom,
    is_tautology_instance,
    load_and_check,
    match_axiom,
)
from ail.syntax import Aware, Implicit, Explicit, SimBox, EkBox, Atom, parse, random_formula

from conftest import data_file
from mutations import proof_mutants

CORPUS = ["e_implies_c.json", "gi_example.json", "e_implies_p.json"]


def proof_from(lines):
    return Proof.from_dict({"lines": [{"n": k + 1, "formula": f, "by": by} for k, (f, by) in enumerate(lines)]})


# schema matching -----------------------------------------------------------------


def test_match_examples():
    assert match_axiom(parse("I[a] p -> p")) == [("T_I", {"phi": Atom("p"), "i": "a"})]
    assert match_axiom(parse("A[a] p <-> A[a] ~p")) == [("AN", {"phi": Atom("p"), "i": "a"})]
    assert match_axiom(parse("p -> I[a] p")) == []


def test_atom_metavariable_only_matches_atoms():
    assert [n for n, _ in match_axiom(parse("A[a] q & q -> S[a] q"))] == ["AA≈"]
    assert match_axiom(parse("A[a](q & r) & (q & r) -> S[a](q & r)")) == []


def test_aliases():
    assert canonical_axiom("EA_EK") == "EA∘⁺"
    assert canonical_axiom("A[∘⁺]M") == "A∘⁺"
    assert canonical_axiom("nonsense") is None


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(sorted(AXIOMS)), st.integers(0, 10**9))
def test_every_schema_recognises_its_instances(name, seed):
    rng = random.Random(seed)
    mods = (Aware, Implicit, Explicit, SimBox, EkBox)
    fs = {v: random_formula(rng, 2, ("p", "q"), ("a", "b"), modal=mods) for v in ("phi", "psi")}
    if name == "AA≈":
        fs = {"p": Atom(rng.choice(["p", "q"]))}
    ags = {"i": rng.choice("ab"), "j": rng.choice("ab")}
    f = instantiate_axiom(name, fs, ags)
    assert name in [n for n, _ in match_axiom(f)]
    # soundness of the instance on a handful of random models
    for s in range(5):
        m = random_model(["p", "q"], ["a", "b"], rng.randint(1, 4), seed + s)
        assert model_valid(m, f)


# tautologies -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, want",
    [
        ("E[a] p | ~E[a] p", True),
        ("(E[a] p <-> A[a] p & C[a] p) -> (E[a] p -> C[a] p)", True),
        ("E[a] p -> p", False),
        ("p -> p", True),
        ("(p -> q) -> (~q -> ~p)", True),
        ("(p -> q) -> (q -> p)", False),
    ],
)
def test_tautology_examples(text, want):
    assert is_tautology_instance(parse(text)) is want


def test_tautology_capacity():
    big = " | ".join(f"x{k}" for k in range(21))
    with pytest.raises(CapacityError):
        is_tautology_instance(parse(big))
    assert is_tautology_instance(parse(" | ".join(f"x{k}" for k in range(19)) + " | ~x0"))


def test_tautology_against_brute_force():
    import itertools

    from oracles import holds
    from ail.model import EpistemicModel

    rng = random.Random(7)
    for _ in range(200):
        f = random_formula(rng, 4, ("p", "q", "r"), ("a",), modal=())
        rows = itertools.product([False, True], repeat=3)
        brute = True
        for bits in rows:
            val = {p: ["w"] for p, b in zip("pqr", bits) if b}
            m = EpistemicModel.build(["w"], ["a"], ["p", "q", "r"], val, {"a": [("w", "w")]}, {"a": []})
            brute &= holds(m, "w", f)
        assert is_tautology_instance(f) is brute


# proofs ------------------------------------------------------------------------------


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_accepted_and_sound(name):
    res = load_and_check(data_file("proofs/" + name))
    assert res.accepted, str(res)
    final = Proof.load(data_file("proofs/" + name)).conclusion
    assert find_countermodel(final, SearchBounds(max_worlds=3)).verdict == VALID_UP_TO_BOUND


def test_bad_axiom_rejected():
    res = load_and_check(data_file("proofs/bad_axiom.json"))
    assert (res.accepted, res.line, res.reason) == (False, 1, "not-an-instance")
    assert str(res).startswith("rejected at line 1: not-an-instance")


def test_rejection_reasons():
    cases = [
        ([("I[a] p -> p", {"axiom": "T_X"})], "unknown-axiom"),
        ([("E[a] p -> p", "taut")], "not-a-tautology"),
        ([("p -> p", "taut"), ("q", {"mp": [1, 3]})], "bad-citation"),
        ([("p -> p", "taut"), ("p", "taut"), ("q", {"mp": [2, 1]})], "not-a-tautology"),
        ([("p -> p", "taut"), ("q -> q", "taut"), ("q", {"mp": [1, 2]})], "mp-mismatch"),
        ([("p -> p", "taut"), ("I[b](p -> p)", {"gi": {"from": 1, "agent": "a"}})], "rule-mismatch"),
        ([("p -> p", "taut"), ("C[a](p -> p)", {"gsim": {"from": 1, "agent": "a"}})], "rule-mismatch"),
        ([("+[a]{p}(p -> p)", "taut")], "dynamic-operator"),
    ]
    for lines, reason in cases:
        res = check_proof(proof_from(lines))
        assert not res.accepted and res.reason == reason, (lines, res)


def test_numbering_and_empty():
    assert check_proof(Proof(())).reason == "empty"
    pf = Proof.from_dict({"lines": [
        {"n": 2, "formula": "p -> p", "by": "taut"},
        {"n": 1, "formula": "q -> q", "by": "taut"},
    ]})
    assert check_proof(pf).reason == "bad-numbering"


def test_infer_axiom_mode():
    pf = proof_from([("I[a] p -> p", {"axiom": "?"})])
    assert not check_proof(pf).accepted
    assert check_proof(pf, infer_axiom=True).accepted


def test_mp_and_rules_work_modulo_sugar():
    pf = proof_from([("p -> p", "taut"), ("~p | p", "taut"), ("S[a](p -> p)", {"gsim": {"from": 1, "agent": "a"}})])
    assert check_proof(pf).accepted


def test_round_trip_through_json():
    pf = Proof.load(data_file("proofs/e_implies_p.json"))
    assert Proof.from_dict(json.loads(json.dumps(pf.to_dict()))) == pf


@pytest.mark.parametrize("name", CORPUS)
def test_single_token_mutations_rejected(name):
    with open(data_file("proofs/" + name), encoding="utf-8") as fh:
        data = json.load(fh)
    mutants = proof_mutants(data)
    assert len(mutants) > 40
    for m in mutants:
        res = check_proof(Proof.from_dict(m))
        assert not res.accepted, json.dumps(m)
