"""Shared test data paths and random problem generators."""

import random
from pathlib import Path

from slatkit.locality import AxiomSet, Composition, Inclusion
from slatkit.terms import App, Const, Eq, Leq, mk_meet

DATA = Path(__file__).parent / "data"


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid or "criterion" not in nodeid:
                continue
            if getattr(rep, "when", "call") == "call" or outcome == "error":
                name = nodeid.split("::")[-1]
                rows[name] = rows.get(name, True) and outcome == "passed"
    if rows:
        terminalreporter.section("acceptance criteria")
        for name in sorted(rows):
            terminalreporter.write_line(
                f"{name}: {'PASS' if rows[name] else 'FAIL'}")


def read_data(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


def rand_flat_term(rng: random.Random, consts, max_width: int = 3):
    width = rng.randint(1, max_width)
    return mk_meet(Const(rng.choice(consts)) for _ in range(width))


def rand_flat_atom(rng: random.Random, consts):
    lhs = rand_flat_term(rng, consts)
    rhs = rand_flat_term(rng, consts)
    if rng.random() < 0.15:
        return Eq(lhs, rhs)
    return Leq(lhs, rhs)


def rand_flat_problem(rng: random.Random):
    """Constant-only atom set plus goal, within the brute force budget."""
    consts = [f"c{i}" for i in range(rng.randint(2, 8))]
    atoms = tuple(rand_flat_atom(rng, consts) for _ in range(rng.randint(1, 12)))
    return atoms, rand_flat_atom(rng, consts)


def rand_term(rng: random.Random, consts, fns, depth: int = 2):
    if depth == 0 or not fns or rng.random() < 0.55:
        return rand_flat_term(rng, consts, 2)
    return App(rng.choice(fns), rand_term(rng, consts, fns, depth - 1))


def rand_axioms(rng: random.Random, fns) -> AxiomSet:
    axioms = []
    for _ in range(rng.randint(0, 3)):
        if len(fns) >= 2 and rng.random() < 0.5:
            f, g = rng.sample(fns, 2)
            axioms.append(Inclusion(f, g))
        elif fns:
            axioms.append(Composition(rng.choice(fns), rng.choice(fns),
                                      rng.choice(fns)))
    return AxiomSet(tuple(fns), tuple(axioms))


def rand_slo_problem(rng: random.Random):
    """Two-sided problem over a small mixed signature.

    Constants are partitioned up front (a* only on side A, b* only on
    side B, s* anywhere) so coloring never clashes. Most draws also
    plant a bridge from the goal endpoints through a shared constant,
    which keeps the entailed fraction high enough to exercise the
    interpolation path.
    """
    shared = [f"s{i}" for i in range(rng.randint(1, 2))]
    a_priv = [f"a{i}" for i in range(rng.randint(1, 2))]
    b_priv = [f"b{i}" for i in range(rng.randint(1, 2))]
    fns = ["f", "g", "h"][: rng.randint(0, 3)]
    axioms = rand_axioms(rng, fns)
    a_vocab = a_priv + shared
    b_vocab = b_priv + shared
    a_atoms = [Leq(rand_term(rng, a_vocab, fns), rand_term(rng, a_vocab, fns))
               for _ in range(rng.randint(2, 4))]
    b_atoms = [Leq(rand_term(rng, b_vocab, fns), rand_term(rng, b_vocab, fns))
               for _ in range(rng.randint(2, 4))]
    goal = Leq(Const(rng.choice(a_priv)), Const(rng.choice(b_priv)))
    if rng.random() < 0.7:
        s = Const(rng.choice(shared))
        a_atoms.append(Leq(goal.lhs, s))
        b_atoms.append(Leq(s, goal.rhs))
    return tuple(a_atoms), tuple(b_atoms), goal, axioms
