"""Interpolation: sharing maps, mixed-instance splitting, end-to-end
separation."""

import random

import pytest

from conftest import rand_slo_problem
from slatkit.interp import (
    NoSharedWitness,
    VerificationFailed,
    intersection_sharing,
    interpolate,
    theta_sharing,
    unfold,
)
from slatkit.locality import AxiomSet, Composition, Inclusion, NotEntailed
from slatkit.terms import (
    App,
    Color,
    Const,
    Leq,
    parse_atom,
    parse_term,
    term_constants,
    term_functions,
)


def atoms_of(*texts):
    return tuple(parse_atom(s) for s in texts)


def slo_axioms() -> AxiomSet:
    return AxiomSet(("f", "g"), (Composition("f", "g", "g"),))


def slo_sides():
    a = atoms_of("d <= g(a)", "a <= c", "g(c) <= a")
    b = atoms_of("b <= d", "b <= f(b)")
    return a, b


# ---------------------------------------------------------------------------
# sharing maps


def test_theta_sharing_links_axiom_cooccurrence():
    smap = theta_sharing(slo_axioms(), {"g"}, {"f"})
    assert smap.shared_functions == {"f", "g"}
    assert frozenset({"f", "g"}) in smap.classes
    assert not smap.intersection


def test_theta_sharing_is_transitive():
    axioms = AxiomSet(("f", "g", "h"),
                      (Inclusion("f", "g"), Inclusion("g", "h")))
    smap = theta_sharing(axioms, {"f"}, {"h"})
    assert smap.shared_functions == {"f", "g", "h"}


def test_theta_sharing_keeps_unrelated_apart():
    axioms = AxiomSet(("f", "g"))
    smap = theta_sharing(axioms, {"f"}, {"g"})
    assert smap.shared_functions == frozenset()


def test_intersection_sharing():
    smap = intersection_sharing(slo_axioms(), {"g"}, {"f"})
    assert smap.shared_functions == frozenset()
    assert smap.intersection
    both = intersection_sharing(slo_axioms(), {"f", "g"}, {"f"})
    assert both.shared_functions == {"f"}


# ---------------------------------------------------------------------------
# unfolding


def test_unfold_is_recursive():
    names = {"g_a": parse_term("g(a)"), "f_t": App("f", Const("g_a"))}
    assert unfold(Const("f_t"), names) == parse_term("f(g(a))")


def test_unfold_leaves_real_constants_alone():
    assert unfold(parse_term("a & b"), {}) == parse_term("a & b")


# ---------------------------------------------------------------------------
# worked examples


def test_interpolate_pure_semilattice_chain():
    a = atoms_of("a1 <= c1", "c2 <= a2", "a2 <= c3")
    b = atoms_of("c1 <= b1", "b1 <= c2", "c3 <= b2")
    res = interpolate(a, b, parse_atom("a1 <= b2"), AxiomSet(()))
    assert res.term == Const("c1")
    assert res.splits == ()
    (left, tl), (right, tr) = res.certificates
    assert left == parse_atom("a1 <= c1") and tl.result is True
    assert right == parse_atom("c1 <= b2") and tr.result is True


def test_interpolate_slo_example():
    a, b = slo_sides()
    res = interpolate(a, b, parse_atom("b <= a"), slo_axioms())
    assert res.term == parse_term("d & f(d)")
    assert res.purified_term == parse_term("d & f_d")

    split, = res.splits
    assert split.t == Const("d")
    assert split.name == "f_d"
    assert split.owner is Color.B
    assert split.premise == parse_atom("b <= g_a")
    # the two halves replace the mixed instance b <= g(a) -> f(b) <= g(a)
    assert split.c_a.premises == (parse_atom("b <= d"),)
    assert split.c_a.conclusion == parse_atom("f_b <= f_d")
    assert split.c_b.premises == (parse_atom("d <= g_a"),)
    assert split.c_b.conclusion == parse_atom("f_d <= g_a")

    (left, _), (right, _) = res.certificates
    assert left == Leq(Const("b"), parse_term("d & f(d)"))
    assert right == Leq(parse_term("d & f(d)"), Const("a"))


def test_interpolate_slo_under_intersection_sharing():
    a, b = slo_sides()
    with pytest.raises(NoSharedWitness):
        interpolate(a, b, parse_atom("b <= a"), slo_axioms(),
                    intersection=True)


def test_interpolate_not_entailed():
    a, _ = slo_sides()
    with pytest.raises(NotEntailed):
        interpolate(a, atoms_of("b <= f(b)"), parse_atom("b <= a"),
                    slo_axioms())


def test_interpolate_inconsistent_premises():
    with pytest.raises(ValueError):
        interpolate(atoms_of("a <= s"), atoms_of("s <= b"),
                    parse_atom("x <= y"), AxiomSet(()),
                    neg_b=atoms_of("a <= b"))


def test_interpolate_no_shared_constant():
    # entailment holds inside B alone; nothing shared can witness it
    with pytest.raises(NoSharedWitness):
        interpolate((), atoms_of("a <= b"), parse_atom("a <= b"),
                    AxiomSet(()))


def test_interpolate_deterministic():
    a, b = slo_sides()
    r1 = interpolate(a, b, parse_atom("b <= a"), slo_axioms())
    r2 = interpolate(a, b, parse_atom("b <= a"), slo_axioms())
    assert r1.term == r2.term
    assert [s.name for s in r1.splits] == [s.name for s in r2.splits]
    assert r1.fired == r2.fired


# ---------------------------------------------------------------------------
# random round trips


def entailed_problems(seed, count):
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        assert attempts < count * 60, "generator yields too few entailed cases"
        a, b, goal, axioms = rand_slo_problem(rng)
        try:
            res = interpolate(a, b, goal, axioms)
        except NotEntailed:
            continue
        except ValueError:
            continue        # inconsistent draw
        out.append((a, b, goal, axioms, res))
    return out


def test_random_interpolants_verify_and_stay_shared():
    cases = entailed_problems(20250817, 120)
    for a, b, goal, axioms, res in cases:
        (_, tl), (_, tr) = res.certificates
        assert tl.result is True and tr.result is True
        assert term_functions(res.term) <= res.sharing.shared_functions
        assert term_constants(res.term) <= res.sharing.shared_constants


def test_random_interpolants_certify_against_fresh_runs():
    from slatkit import locality

    for a, b, goal, axioms, res in entailed_problems(99, 40):
        left = Leq(goal.lhs, res.term)
        right = Leq(res.term, goal.rhs)
        assert locality.entails(a, b, left, axioms)
        assert locality.entails(a, b, right, axioms)
