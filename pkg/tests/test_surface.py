import json

import pytest

from folkit.jsonio import dumps, formula_from_json, formula_to_json
from folkit.surface import (ParseError, parse, parse_term,
                            parse_with_signature, print_formula)
from folkit.syntax import (All, App, Atom, Bot, Conj, Disj, Ex, Impl, Neg,
                           Signature, Var)

P2 = Signature(preds=(("P", 2),))


def test_parse_basic():
    sig = Signature(preds=(("P", 1), ("Q", 1)))
    phi = parse("forall x. P(x) -> Q(x)", sig)
    assert phi == All(Impl(Atom("P", (Var(0),)), Atom("Q", (Var(0),))))


def test_parse_paper_representation():
    phi = parse("P(x7, x4) -> forall x. exists y. P(x, y)", P2)
    assert phi == Impl(Atom("P", (Var(7), Var(4))),
                       All(Ex(Atom("P", (Var(1), Var(0))))))


def test_parse_operators():
    phi = parse("p \\/ q /\\ r -> ~p -> false")
    want = Impl(Disj(Atom("p"), Conj(Atom("q"), Atom("r"))),
                Impl(Neg(Atom("p")), Bot))
    assert phi == want


def test_arrow_right_associative():
    assert parse("p -> q -> r") == Impl(Atom("p"), Impl(Atom("q"), Atom("r")))


def test_parse_syntax_error_position():
    with pytest.raises(ParseError) as err:
        parse("P(x0,", P2)
    assert "1:6" in str(err.value)  # the missing term right after the comma
    with pytest.raises(ParseError):
        parse("p ->")
    with pytest.raises(ParseError):
        parse("p q")


def test_parse_unknown_symbol_and_arity():
    with pytest.raises(ParseError):
        parse("R(x0)", P2)
    with pytest.raises(ParseError):
        parse("P(x0)", P2)  # arity mismatch
    with pytest.raises(ParseError):
        parse("P(x0, x1) /\\ P(x0)")  # inconsistent inferred arity


def test_round_trip_golden_corpus():
    golden = [
        "p -> p",
        "~p -> ~p",
        "p \\/ q",
        "p /\\ (q \\/ r)",
        "(p -> q) -> p \\/ r",
        "forall x1. P(x1, x0)",
        "forall x0. exists x1. P(x0, x1) -> Q(f(x0))",
        "forall x0. forall x1. P(x0, x1) -> P(x1, x0)",
        "false -> p",
        "~(p -> ~q)",
        "P(f(f(c)), c)",
    ]
    for text in golden:
        phi = parse(text)
        assert print_formula(phi) == text
        assert parse(print_formula(phi)) == phi


def test_print_parse_identity_on_trees():
    trees = [
        All(Ex(Atom("P", (Var(1), Var(0))))),
        Impl(Atom("P", (Var(7), Var(4))), All(Atom("P", (Var(0), Var(5))))),
        Neg(All(Neg(Atom("Q", (App("f", (Var(0),)),))))),
        Disj(Conj(Atom("p"), Bot), Impl(Bot, Atom("p"))),
    ]
    for phi in trees:
        assert parse(print_formula(phi)) == phi


def test_parse_with_signature_infers():
    phi, sig = parse_with_signature("P(f(c), x0) -> q")
    assert sig.pred_arity("P") == 2
    assert sig.pred_arity("q") == 0
    assert sig.func_arity("f") == 1
    assert sig.func_arity("c") == 0


def test_parse_term():
    assert parse_term("f(x0, g(x1))") == App("f", (Var(0), App("g", (Var(1),))))
    assert parse_term("x3") == Var(3)


def test_formula_json_round_trip():
    samples = [
        Bot,
        Atom("P", (Var(0), App("f", (Var(1),)))),
        Impl(Atom("p"), Conj(Atom("q"), Disj(Bot, Atom("p")))),
        All(Ex(Atom("P", (Var(1), Var(0))))),
    ]
    for phi in samples:
        blob = dumps(formula_to_json(phi))
        assert formula_from_json(json.loads(blob)) == phi
        # bit-exact: re-encoding is stable
        assert dumps(formula_to_json(formula_from_json(json.loads(blob)))) == blob


def test_json_schema_shape():
    phi = Impl(Atom("P", (Var(0),)), Bot)
    assert formula_to_json(phi) == {
        "impl": [{"atom": ["P", [{"var": 0}]]}, {"bot": True}]}


def test_derivation_json_bit_exact():
    from folkit.jsonio import deriv_from_json, deriv_to_json
    from folkit.kernel import check, nd_assume, nd_ii
    from folkit.search import ljt_search
    from folkit.syntax import Atom, Impl

    p, q = Atom("p"), Atom("q")
    samples = [
        nd_ii(nd_assume("ndi", (p,), p)),
        ljt_search((), Impl(p, Impl(q, p))),
    ]
    for d in samples:
        blob = dumps(deriv_to_json(d))
        back = deriv_from_json(json.loads(blob))
        assert back == d
        assert dumps(deriv_to_json(back)) == blob
        check(back)
