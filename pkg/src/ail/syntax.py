"""Formulas of the awareness/indistinguishability language.

Formulas are immutable trees of frozen dataclasses.  The concrete ASCII
grammar is::

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?                 right associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | modal unary | primary
    modal   := ("A"|"I"|"E"|"S"|"C") "[" agent "]"
             | ("+"|"-") "[" agent "]" "{" atom ("," atom)* "}"
    primary := atom | "(" formula ")"

``S`` is the box over awareness-equivalent worlds and ``C`` the box over the
EK-accessible worlds.  ``+``/``-`` are the becoming-aware and
becoming-unaware updates.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

IDENT = re.compile(r"[a-z][a-zA-Z0-9_]*")


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Aware(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True, slots=True)
class Implicit(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True, slots=True)
class Explicit(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True, slots=True)
class SimBox(Formula):
    """Box over the agent's awareness-equivalence classes."""

    agent: str
    sub: Formula


@dataclass(frozen=True, slots=True)
class EkBox(Formula):
    """Box over the agent's EK-accessibility classes."""

    agent: str
    sub: Formula


@dataclass(frozen=True, slots=True)
class AddAware(Formula):
    agent: str
    atoms: frozenset
    sub: Formula


@dataclass(frozen=True, slots=True)
class DelAware(Formula):
    agent: str
    atoms: frozenset
    sub: Formula


BINARY = (And, Or, Implies, Iff)
MODAL = (Aware, Implicit, Explicit, SimBox, EkBox)
DYNAMIC = (AddAware, DelAware)

MODAL_LETTER = {Aware: "A", Implicit: "I", Explicit: "E", SimBox: "S", EkBox: "C"}
LETTER_MODAL = {v: k for k, v in MODAL_LETTER.items()}
BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->"}

# higher binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_RIGHT_ASSOC = {Implies}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


class UnsupportedFormula(ValueError):
    pass


# ---------------------------------------------------------------------------
# lexer / parser

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[&|~()\[\]{},+\-])|(?P<modal>[AIESC])(?=\s*\[)|(?P<ident>[a-z][a-zA-Z0-9_]*))"
)


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str  # "op", "modal", "ident", "eof"
    text: str
    line: int
    column: int


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


_LEXICAL_EXPECTED = ("atom", "modal operator", "~", "(")


def _tokenize(text: str) -> list[_Tok]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            line, col = _position(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, _LEXICAL_EXPECTED)
        kind = m.lastgroup
        line, col = _position(text, m.start(kind))
        tokens.append(_Tok(kind, m.group(kind), line, col))
        pos = m.end()
    line, col = _position(text, len(text))
    tokens.append(_Tok("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected: Iterable[str]):
        tok = self.cur
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"unexpected {found}", tok.line, tok.column, expected)

    def accept(self, text: str) -> bool:
        if self.cur.kind == "op" and self.cur.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.error([text])

    def ident(self, what: str) -> str:
        if self.cur.kind != "ident":
            self.error([what])
        name = self.cur.text
        self.i += 1
        return name

    def parse(self) -> Formula:
        f = self.iff()
        if self.cur.kind != "eof":
            self.error(["&", "|", "->", "<->", "end of input"])
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.accept("<->"):
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.accept("->"):
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.cur
        if self.accept("~"):
            return Not(self.unary())
        if tok.kind == "modal":
            self.i += 1
            self.expect("[")
            agent = self.ident("agent")
            self.expect("]")
            return LETTER_MODAL[tok.text](agent, self.unary())
        if tok.kind == "op" and tok.text in "+-":
            self.i += 1
            self.expect("[")
            agent = self.ident("agent")
            self.expect("]")
            self.expect("{")
            atoms = [self.ident("atom")]
            while self.accept(","):
                atoms.append(self.ident("atom"))
            self.expect("}")
            cls = AddAware if tok.text == "+" else DelAware
            return cls(agent, frozenset(atoms), self.unary())
        return self.primary()

    def primary(self) -> Formula:
        if self.cur.kind == "ident":
            name = self.cur.text
            self.i += 1
            return Atom(name)
        if self.accept("("):
            f = self.iff()
            self.expect(")")
            return f
        self.error(["atom", "(", "~", "A[", "I[", "E[", "S[", "C[", "+[", "-["])


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula; raises :class:`ParseError`."""
    f = _Parser(text).parse()
    check_dynamic_placement(f)
    return f


# ---------------------------------------------------------------------------
# printer


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 5)


def to_text(f: Formula) -> str:
    """Canonical text with minimal parentheses."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + _operand(f.sub)
    if isinstance(f, MODAL):
        return f"{MODAL_LETTER[type(f)]}[{f.agent}]" + _spaced(f.sub)
    if isinstance(f, DYNAMIC):
        sign = "+" if isinstance(f, AddAware) else "-"
        return f"{sign}[{f.agent}]{{{','.join(sorted(f.atoms))}}}" + _spaced(f.sub)
    if isinstance(f, BINARY):
        p = _PREC[type(f)]
        right_assoc = type(f) in _RIGHT_ASSOC
        left = to_text(f.left)
        if _prec(f.left) < p or (_prec(f.left) == p and right_assoc):
            left = f"({left})"
        right = to_text(f.right)
        if _prec(f.right) < p or (_prec(f.right) == p and not right_assoc):
            right = f"({right})"
        return f"{left} {BINARY_SYMBOL[type(f)]} {right}"
    raise TypeError(f"not a formula: {f!r}")


def _operand(f: Formula) -> str:
    s = to_text(f)
    return f"({s})" if isinstance(f, BINARY) else s


def _spaced(f: Formula) -> str:
    s = _operand(f)
    return s if s.startswith("(") else " " + s


# ---------------------------------------------------------------------------
# syntactic operations


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return (f.sub,)


def atoms_of(f: Formula) -> frozenset[str]:
    """Atoms occurring in ``f``; for updates the updated atoms are included."""
    if isinstance(f, Atom):
        return frozenset((f.name,))
    out = frozenset().union(*(atoms_of(c) for c in children(f)))
    if isinstance(f, DYNAMIC):
        out |= f.atoms
    return out


def agents_of(f: Formula) -> frozenset[str]:
    out = frozenset().union(*(agents_of(c) for c in children(f)))
    if isinstance(f, MODAL + DYNAMIC):
        out |= {f.agent}
    return out


def subformulas(f: Formula) -> frozenset[Formula]:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g not in out:
            out.add(g)
            stack.extend(children(g))
    return frozenset(out)


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


def modal_depth(f: Formula) -> int:
    inner = max((modal_depth(c) for c in children(f)), default=0)
    return inner + 1 if isinstance(f, MODAL + DYNAMIC) else inner


def has_dynamic(f: Formula) -> bool:
    return isinstance(f, DYNAMIC) or any(has_dynamic(c) for c in children(f))


def check_dynamic_placement(f: Formula) -> None:
    """Reject updates nested under an awareness operator."""
    if isinstance(f, Aware) and has_dynamic(f.sub):
        raise UnsupportedFormula(f"awareness of a formula with an update: {to_text(f)}")
    for c in children(f):
        check_dynamic_placement(c)


def desugar(f: Formula) -> Formula:
    """Rewrite ``|``, ``->`` and ``<->`` in terms of ``~`` and ``&``."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.sub))
    if isinstance(f, BINARY):
        a, b = desugar(f.left), desugar(f.right)
        if isinstance(f, And):
            return And(a, b)
        if isinstance(f, Or):
            return Not(And(Not(a), Not(b)))
        if isinstance(f, Implies):
            return Not(And(a, Not(b)))
        return And(Not(And(a, Not(b))), Not(And(b, Not(a))))
    if isinstance(f, DYNAMIC):
        return type(f)(f.agent, f.atoms, desugar(f.sub))
    return type(f)(f.agent, desugar(f.sub))


def conjunction(fs: Iterable[Formula]) -> Formula | None:
    """Left-nested conjunction, or None for an empty sequence."""
    out = None
    for f in fs:
        out = f if out is None else And(out, f)
    return out


def _is_box(f: Formula, cls, agent: str) -> bool:
    return isinstance(f, cls) and f.agent == agent


def closure_rules(g: Formula) -> list[Formula]:
    """Members that the closure conditions demand once ``g`` is present.

    Sugar nodes are kept as they are and count as non-negations.
    """
    out = list(children(g))
    if not isinstance(g, Not):
        out.append(Not(g))
    if isinstance(g, Aware):
        i = g.agent
        for s in subformulas(g.sub):
            out.append(Aware(i, s))
            if isinstance(s, Atom):
                out.append(SimBox(i, s))
        out += [Implicit(i, g), Implicit(i, Not(g))]
    elif isinstance(g, Implicit):
        s, i = g.sub, g.agent
        if not (_is_box(s, Implicit, i) or (isinstance(s, Not) and _is_box(s.sub, Implicit, i))):
            out += [Implicit(i, g), Implicit(i, Not(g))]
    elif isinstance(g, SimBox):
        s, i = g.sub, g.agent
        if not (_is_box(s, SimBox, i) or (isinstance(s, Not) and _is_box(s.sub, SimBox, i))):
            out += [SimBox(i, g), SimBox(i, Not(g))]
    elif isinstance(g, EkBox):
        out.append(SimBox(g.agent, Implicit(g.agent, g)))
    elif isinstance(g, Explicit):
        out += [Aware(g.agent, g.sub), EkBox(g.agent, g.sub)]
    return out


def closure_cl(f: Formula) -> frozenset[Formula]:
    """Least set containing ``f`` and closed under :func:`closure_rules`."""
    if has_dynamic(f):
        raise UnsupportedFormula("closure is not defined for formulas with updates")
    out: set[Formula] = set()
    todo = [f]
    while todo:
        g = todo.pop()
        if g in out:
            continue
        out.add(g)
        todo.extend(h for h in closure_rules(g) if h not in out)
    return frozenset(out)


# ---------------------------------------------------------------------------
# schematic matching and substitution


def substitute(
    f: Formula,
    formulas: Mapping[str, Formula] = {},
    agents: Mapping[str, str] = {},
) -> Formula:
    """Replace metavariable atoms and agent names in ``f``."""
    if isinstance(f, Atom):
        return formulas.get(f.name, f)
    if isinstance(f, Not):
        return Not(substitute(f.sub, formulas, agents))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, formulas, agents), substitute(f.right, formulas, agents))
    agent = agents.get(f.agent, f.agent)
    if isinstance(f, DYNAMIC):
        return type(f)(agent, f.atoms, substitute(f.sub, formulas, agents))
    return type(f)(agent, substitute(f.sub, formulas, agents))


def match(
    pattern: Formula,
    f: Formula,
    formula_vars: frozenset[str],
    atom_vars: frozenset[str] = frozenset(),
    binding: dict | None = None,
) -> dict | None:
    """Match ``f`` against ``pattern``.

    Atoms of ``pattern`` named in ``formula_vars`` match any formula,
    those in ``atom_vars`` match atoms only; every agent of ``pattern`` is a
    metavariable.  Formula bindings are keyed by name, agent bindings by
    ``("agent", name)``.  Returns the binding or None.
    """
    b = {} if binding is None else binding
    if isinstance(pattern, Atom) and (pattern.name in formula_vars or pattern.name in atom_vars):
        if pattern.name in atom_vars and not isinstance(f, Atom):
            return None
        seen = b.get(pattern.name)
        if seen is None:
            b[pattern.name] = f
            return b
        return b if seen == f else None
    if type(pattern) is not type(f):
        return None
    if isinstance(pattern, Atom):
        return b if pattern.name == f.name else None
    if isinstance(pattern, MODAL + DYNAMIC):
        key = ("agent", pattern.agent)
        seen = b.get(key)
        if seen is None:
            b[key] = f.agent
        elif seen != f.agent:
            return None
        if isinstance(pattern, DYNAMIC) and pattern.atoms != f.atoms:
            return None
    for pc, fc in zip(children(pattern), children(f)):
        if match(pc, fc, formula_vars, atom_vars, b) is None:
            return None
    return b


# ---------------------------------------------------------------------------
# random generation


def random_formula(
    rng: random.Random,
    depth: int,
    atoms: tuple[str, ...] = ("p", "q"),
    agents: tuple[str, ...] = ("a", "b"),
    *,
    sugar: bool = True,
    modal: tuple = MODAL,
    dynamic: bool = False,
) -> Formula:
    """Random formula of height at most ``depth``."""
    if depth <= 0 or rng.random() < 0.2:
        return Atom(rng.choice(atoms))
    kinds = ["not", "and"] + (["or", "imp", "iff"] if sugar else []) + (["modal"] * 2 if modal else [])
    if dynamic:
        kinds.append("dyn")
    kind = rng.choice(kinds)

    def sub(d=depth - 1, dyn=dynamic):
        return random_formula(rng, d, atoms, agents, sugar=sugar, modal=modal, dynamic=dyn)

    if kind == "not":
        return Not(sub())
    if kind in ("and", "or", "imp", "iff"):
        cls = {"and": And, "or": Or, "imp": Implies, "iff": Iff}[kind]
        return cls(sub(), sub())
    if kind == "modal":
        cls = rng.choice(modal)
        if cls is Aware:
            return Aware(rng.choice(agents), sub(dyn=False))
        return cls(rng.choice(agents), sub())
    q = frozenset(rng.sample(atoms, rng.randint(1, len(atoms))))
    return rng.choice(DYNAMIC)(rng.choice(agents), q, sub())


def iter_nodes(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from iter_nodes(c)
