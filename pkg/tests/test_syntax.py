import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ail.syntax import (
    AddAware,
    And,
    Atom,
    Aware,
    DelAware,
    EkBox,
    Explicit,
    Iff,
    Implicit,
    Implies,
    Not,
    Or,
    ParseError,
    SimBox,
    UnsupportedFormula,
    atoms_of,
    closure_cl,
    closure_rules,
    desugar,
    iter_nodes,
    modal_depth,
    parse,
    random_formula,
    subformulas,
    to_text,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


# parsing ---------------------------------------------------------------------


def test_parse_single_operator():
    assert parse("E[a] p4") == Explicit("a", Atom("p4"))


def test_parse_nested_implication_under_implicit():
    want = Implicit("b", Implies(And(And(Atom("p2"), Atom("p3")), Atom("f3")), Atom("p4")))
    assert parse("I[b]((p2 & p3 & f3) -> p4)") == want


def test_parse_example_conjunction():
    want = And(Not(Aware("b", Atom("p3"))), Aware("b", And(And(Atom("p2"), Atom("f3")), Atom("p4"))))
    assert parse("~A[b] p3 & A[b](p2 & f3 & p4)") == want


@pytest.mark.parametrize(
    "text, want",
    [
        ("p & q | r", Or(And(p, q), r)),
        ("p | q & r", Or(p, And(q, r))),
        ("p -> q -> r", Implies(p, Implies(q, r))),
        ("p <-> q <-> r", Iff(Iff(p, q), r)),
        ("p -> q <-> r", Iff(Implies(p, q), r)),
        ("~p & q", And(Not(p), q)),
        ("I[a] p & q", And(Implicit("a", p), q)),
        ("~~p", Not(Not(p))),
        ("S[i] C[j] p", SimBox("i", EkBox("j", p))),
        ("+[i]{p, q} E[i] p", AddAware("i", frozenset({"p", "q"}), Explicit("i", p))),
        ("-[i]{p}(p -> q)", DelAware("i", frozenset({"p"}), Implies(p, q))),
    ],
)
def test_precedence_and_associativity(text, want):
    assert parse(text) == want


@pytest.mark.parametrize(
    "text",
    ["", "p &", "(p", "p q", "I[a p", "I[] p", "X[a] p", "+[i]{} p", "p -> ", "P"],
)
def test_parse_errors_carry_position(text):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line >= 1 and err.value.column >= 1
    assert err.value.expected


def test_parse_error_position_on_second_line():
    with pytest.raises(ParseError) as err:
        parse("p &\n  & q")
    assert (err.value.line, err.value.column) == (2, 3)


def test_dynamic_under_aware_is_rejected():
    with pytest.raises(UnsupportedFormula):
        parse("A[i] +[i]{p} p")


# printing --------------------------------------------------------------------


@pytest.mark.parametrize(
    "f, text",
    [
        (Explicit("a", Atom("p4")), "E[a] p4"),
        (Implies(And(p, q), r), "p & q -> r"),
        (Not(Aware("b", Atom("p3"))), "~A[b] p3"),
        (Implies(Implies(p, q), r), "(p -> q) -> r"),
        (Implicit("a", And(p, q)), "I[a](p & q)"),
        (And(p, Or(q, r)), "p & (q | r)"),
        (AddAware("i", frozenset({"q", "p"}), p), "+[i]{p,q} p"),
    ],
)
def test_print(f, text):
    assert to_text(f) == text


# random ASTs -------------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 6))
def test_parse_print_round_trip(seed, depth):
    f = random_formula(random.Random(seed), depth, ("p", "q", "r1"), ("a", "b"), dynamic=True)
    assert parse(to_text(f)) == f


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_atoms_compose(seed):
    rng = random.Random(seed)
    f = random_formula(rng, 3)
    g = random_formula(rng, 3)
    assert atoms_of(Not(f)) == atoms_of(f)
    assert atoms_of(And(f, g)) == atoms_of(f) | atoms_of(g)


def test_atoms_examples():
    assert atoms_of(p) == {"p"}
    assert atoms_of(parse("p2 & p3 & f3")) == {"p2", "p3", "f3"}
    assert atoms_of(Not(p)) == {"p"}
    assert atoms_of(parse("+[i]{q} p")) == {"p", "q"}


def test_subformulas_examples():
    assert subformulas(p) == {p}
    assert subformulas(And(p, q)) == {And(p, q), p, q}
    assert subformulas(Explicit("a", p)) == {Explicit("a", p), p}


def test_desugar_removes_sugar():
    f = desugar(parse("(p | q) -> (p <-> q)"))
    assert not any(isinstance(n, (Or, Implies, Iff)) for n in iter_nodes(f))


def test_modal_depth():
    assert modal_depth(parse("p & q")) == 0
    assert modal_depth(parse("I[a](p & E[b] q) | A[a] p")) == 2


# closure ---------------------------------------------------------------------


def test_closure_of_atom():
    assert closure_cl(p) == {p, Not(p)}


def test_closure_of_aware_contains_condition_five_members():
    cl = closure_cl(Aware("i", p))
    want = {
        Aware("i", p),
        Not(Aware("i", p)),
        p,
        Not(p),
        Implicit("i", Aware("i", p)),
        Implicit("i", Not(Aware("i", p))),
        SimBox("i", p),
    }
    assert want <= cl


def test_closure_of_ek_box():
    cl = closure_cl(EkBox("i", p))
    assert EkBox("i", p) in cl
    assert SimBox("i", Implicit("i", EkBox("i", p))) in cl


def test_closure_rejects_dynamic():
    with pytest.raises(UnsupportedFormula):
        closure_cl(parse("+[i]{p} p"))


def test_closure_never_double_negates_new_members():
    for g in closure_cl(parse("E[a](p -> A[b] q)")):
        if isinstance(g, Not) and isinstance(g.sub, Not):
            pytest.fail(f"double negation {to_text(g)} entered the closure")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closure_contains_subformulas_and_is_a_fixpoint(seed):
    f = random_formula(random.Random(seed), 3, ("p", "q"), ("a", "b"))
    cl = closure_cl(f)
    assert subformulas(f) <= cl
    # one more pass of the rules over the result adds nothing
    assert all(set(closure_rules(g)) <= cl for g in cl)
