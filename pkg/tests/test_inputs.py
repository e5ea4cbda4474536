"""The .slp and .model file formats."""

import pytest

from conftest import read_data
from slatkit.inputs import parse_model, parse_slp
from slatkit.locality import Composition, Inclusion
from slatkit.terms import ParseError, parse_atom


# ---------------------------------------------------------------------------
# .slp


def test_parse_slo_file():
    p = parse_slp(read_data("slo.slp"))
    assert p.functions == ("f", "g")
    assert p.axioms.axioms == (Composition("f", "g", "g"),)
    assert p.a_pos == tuple(parse_atom(s) for s in
                            ("d <= g(a)", "a <= c", "g(c) <= a"))
    assert p.b_pos == tuple(parse_atom(s) for s in ("b <= d", "b <= f(b)"))
    assert p.a_neg == () and p.b_neg == ()
    assert p.goal == parse_atom("b <= a")
    assert p.sigma is None and p.target is None


def test_parse_slp_negative_literals_and_comments():
    p = parse_slp(
        "functions f\n"
        "# two-sided with a negative literal\n"
        "side A\n"
        "a <= f(a)   # trailing comment\n"
        "! a <= b\n"
        "side B\n"
        "c = b\n"
        "goal a <= c\n"
    )
    assert p.a_pos == (parse_atom("a <= f(a)"),)
    assert p.a_neg == (parse_atom("a <= b"),)
    assert p.b_pos == (parse_atom("c = b"),)


def test_parse_slp_definability_file():
    p = parse_slp(read_data("beth_fe.slp"))
    assert p.goal is None
    assert p.sigma == ("g", "e")
    assert p.target == "a"


@pytest.mark.parametrize("text,what,line", [
    ("side A\nf(a) <= b\ngoal a <= b", "undeclared function", 2),
    ("side A\na <= goal\ngoal a <= b", "used as a constant", 2),
    ("functions f\nside A\nfunctions g\ngoal a <= a", "before the sides", 3),
    ("functions f\nf(a) <= b\ngoal a <= b", "inside 'side", 2),
    ("side A\n! a = b\ngoal a <= b", "negated equality", 2),
    ("side A\na <= b\ngoal a = b", "must be a <= atom", 3),
    ("goal a <= b\nside A", "follow the goal", 2),
    ("functions f f\ngoal a <= a", "declared twice", 1),
    ("axiom inclusion f\ngoal a <= a", "takes two", 1),
    ("axiom widening f g\ngoal a <= a", "unknown axiom kind", 1),
    ("side A\na <= b", "missing goal", 3),
    ("sigma q\ntarget a\nside A\na <= b", "occurs nowhere", 1),
    ("sigma b\ntarget q\nside A\na <= b", "occurs in no atom", 2),
])
def test_parse_slp_errors(text, what, line):
    with pytest.raises(ParseError) as e:
        parse_slp(text)
    assert what in str(e.value)
    assert e.value.line == line


def test_parse_slp_undeclared_axiom_function():
    with pytest.raises(ValueError):
        parse_slp("functions f\naxiom inclusion f g\ngoal a <= a")


def test_parse_slp_literal_position():
    with pytest.raises(ParseError) as e:
        parse_slp("side A\na <= (b\ngoal a <= b")
    assert (e.value.line, e.value.column) == (2, 8)


# ---------------------------------------------------------------------------
# .model


def test_parse_four_point_model_file():
    spec = parse_model(read_data("four_point.model"))
    m = spec.model
    assert m.carrier == ("a", "e", "b", "d")
    assert m.meet[("a", "e")] == "e"
    assert m.funcs["f"]["e"] == "a"
    assert m.consts == {"a": "a", "e": "e", "b": "b"}
    assert spec.compositions == (("f", "g", "g"),)
    assert spec.inclusions == ()
    assert spec.atoms == tuple(
        parse_atom(s) for s in ("a <= f(e)", "e <= g(b)", "g(b) <= a")
    )


def test_parse_model_minimal():
    spec = parse_model("carrier x\nmeet x x\n")
    assert spec.model.carrier == ("x",)
    assert spec.model.meet == {("x", "x"): "x"}
    assert spec.atoms == ()


@pytest.mark.parametrize("text,what", [
    ("meet x x", "carrier must be declared first"),
    ("carrier x\nmeet x y", "not a carrier element"),
    ("carrier x\nmeet x\n", "meet row needs"),
    ("carrier x\nmeet x x\nmeet x x", "given twice"),
    ("carrier x y\nmeet x x x\nmeet y x x\nfun f x", "fun row needs"),
    ("carrier x\nmeet x x\nconst c = y", "not a carrier element"),
    ("carrier x\nmeet x x\nconst c = x\nconst c = x", "bound twice"),
    ("carrier x\nmeet x x\naxiom inclusion f g", "uninterpreted function"),
    ("carrier x\nmeet x x\natom c <= c", "unbound constant"),
    ("carrier x\nmeet x x\nfrobnicate", "unknown directive"),
    ("carrier x y\nmeet x x x", "missing meet row for y"),
    ("", "missing carrier"),
])
def test_parse_model_errors(text, what):
    with pytest.raises(ParseError) as e:
        parse_model(text)
    assert what in str(e.value)


def test_parse_model_atom_with_function():
    spec = parse_model(
        "carrier x\nmeet x x\nfun f x\nconst c = x\natom f(c) <= c\n"
    )
    assert spec.atoms == (parse_atom("f(c) <= c"),)
