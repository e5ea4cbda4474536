"""Line-oriented input formats for problems and finite models.

Two formats, both UTF-8 with # comments:

  .slp    entailment problems over meet-terms with monotone operators.
          `functions f g`, `axiom inclusion f g`, `axiom composition
          f g h`, `side A` / `side B` followed by literal lines
          (`t <= t`, `t = t`, `! t <= t`), optional `sigma s1 s2 ...`
          and `target c` for definability questions, and `goal a <= b`.

  .model  finite algebras: `carrier e1 .. en`, one `meet ei v1 .. vn`
          row per element, `fun f v1 .. vn` tables, `const c = ei`
          bindings, then optional `axiom ...` and `atom ...` lines to
          check against the tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .locality import AxiomSet, Composition, Inclusion
from .slat import FiniteModel
from .terms import (
    Atom,
    Eq,
    Leq,
    ParseError,
    atom_constants,
    atom_functions,
    tokenize,
    parse_atom,
    parse_literal,
)

_SLP_RESERVED = {"functions", "axiom", "side", "goal", "sigma", "target"}
_MODEL_RESERVED = {"carrier", "meet", "fun", "const", "axiom", "atom"}
_PUNCT = {"&", "(", ")", ".", "<=", "=", "!", ",", "<"}


@dataclass(frozen=True)
class SlpProblem:
    functions: tuple[str, ...]
    axioms: AxiomSet
    a_pos: tuple[Atom, ...]
    a_neg: tuple[Atom, ...]
    b_pos: tuple[Atom, ...]
    b_neg: tuple[Atom, ...]
    goal: Leq | None
    sigma: tuple[str, ...] | None = None
    target: str | None = None


@dataclass(frozen=True)
class ModelSpec:
    model: FiniteModel
    inclusions: tuple[tuple[str, str], ...]
    compositions: tuple[tuple[str, str, str], ...]
    atoms: tuple[Atom, ...]


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _idents(toks, lineno: int, what: str) -> list[str]:
    out = []
    for tok, col in toks:
        if tok in _PUNCT:
            raise ParseError(f"expected {what}, got {tok!r}", lineno, col)
        out.append(tok)
    return out


def _axiom_line(toks, lineno: int):
    """Parse the tail of an `axiom` line into an Inclusion or Composition."""
    names = _idents(toks, lineno, "a function name")
    if not names:
        raise ParseError("expected 'inclusion' or 'composition'", lineno, 1)
    kind, args = names[0], names[1:]
    if kind == "inclusion":
        if len(args) != 2:
            raise ParseError("inclusion takes two function names", lineno, toks[0][1])
        return Inclusion(args[0], args[1])
    if kind == "composition":
        if len(args) != 3:
            raise ParseError("composition takes three function names", lineno, toks[0][1])
        return Composition(args[0], args[1], args[2])
    raise ParseError(f"unknown axiom kind {kind!r}", lineno, toks[0][1])


def parse_slp(text: str) -> SlpProblem:
    functions: list[str] = []
    axioms = []
    pos = {"A": [], "B": []}
    neg = {"A": [], "B": []}
    side: str | None = None
    goal: Leq | None = None
    sigma: list[str] | None = None
    target: str | None = None
    used_consts: set[str] = set()
    sigma_line = target_line = 0

    def check_atom(atom: Atom, lineno: int) -> None:
        for f in atom_functions(atom):
            if f not in functions:
                raise ParseError(f"undeclared function {f}", lineno, 1)
        for c in atom_constants(atom):
            if c in _SLP_RESERVED:
                raise ParseError(f"reserved word {c!r} used as a constant", lineno, 1)
            used_consts.add(c)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        toks = tokenize(line, lineno)
        if not toks:
            continue
        head, col0 = toks[0]
        if goal is not None:
            raise ParseError("nothing may follow the goal", lineno, col0)
        if head == "functions":
            if side is not None:
                raise ParseError("functions must be declared before the sides", lineno, col0)
            for name in _idents(toks[1:], lineno, "a function name"):
                if name in _SLP_RESERVED:
                    raise ParseError(f"reserved word {name!r}", lineno, col0)
                if name in functions:
                    raise ParseError(f"function {name} declared twice", lineno, col0)
                functions.append(name)
            if len(toks) == 1:
                raise ParseError("empty functions declaration", lineno, col0)
        elif head == "axiom":
            if side is not None:
                raise ParseError("axioms must precede the sides", lineno, col0)
            axioms.append(_axiom_line(toks[1:], lineno))
        elif head == "side":
            if len(toks) != 2 or toks[1][0] not in ("A", "B"):
                raise ParseError("expected 'side A' or 'side B'", lineno, col0)
            side = toks[1][0]
        elif head == "sigma":
            if sigma is not None:
                raise ParseError("sigma given twice", lineno, col0)
            sigma, sigma_line = _idents(toks[1:], lineno, "a symbol"), lineno
            if not sigma:
                raise ParseError("empty sigma declaration", lineno, col0)
        elif head == "target":
            if target is not None:
                raise ParseError("target given twice", lineno, col0)
            names = _idents(toks[1:], lineno, "a constant")
            if len(names) != 1:
                raise ParseError("target takes one constant", lineno, col0)
            target, target_line = names[0], lineno
        elif head == "goal":
            atom = parse_atom(line.split("goal", 1)[1], lineno)
            if not isinstance(atom, Leq):
                raise ParseError("goal must be a <= atom", lineno, col0)
            check_atom(atom, lineno)
            goal = atom
        else:
            if side is None:
                raise ParseError(
                    "literals must appear inside 'side A' or 'side B'", lineno, col0
                )
            atom, positive = parse_literal(line, lineno)
            if not positive and isinstance(atom, Eq):
                raise ParseError("negated equality is not supported", lineno, col0)
            check_atom(atom, lineno)
            (pos if positive else neg)[side].append(atom)
    if goal is None and target is None:
        nl = len(text.splitlines()) + 1
        raise ParseError("missing goal line (or target for definability)", nl, 1)
    axiom_set = AxiomSet(tuple(functions), tuple(axioms))
    if sigma is not None:
        for s in sigma:
            if s not in functions and s not in used_consts:
                raise ParseError(f"sigma symbol {s} occurs nowhere", sigma_line, 1)
    if target is not None and target not in used_consts:
        raise ParseError(f"target {target} occurs in no atom", target_line, 1)
    return SlpProblem(
        functions=tuple(functions),
        axioms=axiom_set,
        a_pos=tuple(pos["A"]),
        a_neg=tuple(neg["A"]),
        b_pos=tuple(pos["B"]),
        b_neg=tuple(neg["B"]),
        goal=goal,
        sigma=tuple(sigma) if sigma is not None else None,
        target=target,
    )


def parse_model(text: str) -> ModelSpec:
    carrier: list[str] | None = None
    meet: dict[tuple[str, str], str] = {}
    meet_rows: set[str] = set()
    funcs: dict[str, dict[str, str]] = {}
    consts: dict[str, str] = {}
    inclusions: list[tuple[str, str]] = []
    compositions: list[tuple[str, str, str]] = []
    atoms: list[Atom] = []

    def element(name: str, lineno: int, col: int) -> str:
        if carrier is None or name not in carrier:
            raise ParseError(f"not a carrier element: {name}", lineno, col)
        return name

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        toks = tokenize(line, lineno)
        if not toks:
            continue
        head, col0 = toks[0]
        if head != "carrier" and carrier is None:
            raise ParseError("carrier must be declared first", lineno, col0)
        if head == "carrier":
            if carrier is not None:
                raise ParseError("carrier declared twice", lineno, col0)
            carrier = []
            for name in _idents(toks[1:], lineno, "an element"):
                if name in _MODEL_RESERVED:
                    raise ParseError(f"reserved word {name!r}", lineno, col0)
                if name in carrier:
                    raise ParseError(f"element {name} declared twice", lineno, col0)
                carrier.append(name)
            if not carrier:
                raise ParseError("empty carrier", lineno, col0)
        elif head == "meet":
            names = _idents(toks[1:], lineno, "an element")
            if len(names) != len(carrier) + 1:
                raise ParseError(
                    f"meet row needs 1 + {len(carrier)} elements", lineno, col0
                )
            row = element(names[0], lineno, toks[1][1])
            if row in meet_rows:
                raise ParseError(f"meet row for {row} given twice", lineno, col0)
            meet_rows.add(row)
            for y, v in zip(carrier, names[1:]):
                meet[(row, y)] = element(v, lineno, col0)
        elif head == "fun":
            names = _idents(toks[1:], lineno, "an element")
            if len(names) != len(carrier) + 1:
                raise ParseError(
                    f"fun row needs a name and {len(carrier)} values", lineno, col0
                )
            f = names[0]
            if f in _MODEL_RESERVED:
                raise ParseError(f"reserved word {f!r}", lineno, col0)
            if f in funcs:
                raise ParseError(f"function {f} given twice", lineno, col0)
            funcs[f] = {
                x: element(v, lineno, col0) for x, v in zip(carrier, names[1:])
            }
        elif head == "const":
            if (
                len(toks) != 4
                or toks[2][0] != "="
                or toks[1][0] in _PUNCT
                or toks[3][0] in _PUNCT
            ):
                raise ParseError("expected 'const c = element'", lineno, col0)
            c = toks[1][0]
            if c in _MODEL_RESERVED:
                raise ParseError(f"reserved word {c!r}", lineno, col0)
            if c in consts:
                raise ParseError(f"constant {c} bound twice", lineno, col0)
            consts[c] = element(toks[3][0], lineno, toks[3][1])
        elif head == "axiom":
            ax = _axiom_line(toks[1:], lineno)
            names = (ax.f, ax.g) if isinstance(ax, Inclusion) else (ax.f, ax.g, ax.h)
            for f in names:
                if f not in funcs:
                    raise ParseError(f"uninterpreted function {f}", lineno, col0)
            if isinstance(ax, Inclusion):
                inclusions.append((ax.f, ax.g))
            else:
                compositions.append((ax.f, ax.g, ax.h))
        elif head == "atom":
            atom = parse_atom(line.split("atom", 1)[1], lineno)
            for f in atom_functions(atom):
                if f not in funcs:
                    raise ParseError(f"uninterpreted function {f}", lineno, col0)
            for c in atom_constants(atom):
                if c not in consts:
                    raise ParseError(f"unbound constant {c}", lineno, col0)
            atoms.append(atom)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col0)
    end = len(text.splitlines()) + 1
    if carrier is None:
        raise ParseError("missing carrier", end, 1)
    missing = [x for x in carrier if x not in meet_rows]
    if missing:
        raise ParseError(f"missing meet row for {missing[0]}", end, 1)
    return ModelSpec(
        model=FiniteModel(tuple(carrier), meet, funcs, consts),
        inclusions=tuple(inclusions),
        compositions=tuple(compositions),
        atoms=tuple(atoms),
    )
