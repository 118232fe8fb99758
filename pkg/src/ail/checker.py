"""Satisfaction, model validity and bounded countermodel search."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .model import EpistemicModel, IndexedModel, enumerate_indexed
from .syntax import (
    DYNAMIC,
    AddAware,
    And,
    Atom,
    Aware,
    EkBox,
    Explicit,
    Formula,
    Iff,
    Implicit,
    Implies,
    Not,
    Or,
    SimBox,
    agents_of,
    atoms_of,
    check_dynamic_placement,
    closure_cl,
    conjunction,
    has_dynamic,
    parse,
    substitute,
    to_text,
)


class FormulaError(ValueError):
    """Formula not evaluable on a model (undeclared atom or agent)."""


# ---------------------------------------------------------------------------
# compiled evaluation


class Program:
    """A formula flattened into a list of steps over shared subformulas.

    Evaluating a program on an :class:`IndexedModel` yields the set of worlds
    (as a bit mask) where the formula holds.  ``explicit`` selects the
    reading of ``E``: ``"ek"`` for awareness plus the EK box, ``"ik"`` for
    awareness plus implicit knowledge.
    """

    def __init__(self, f: Formula, explicit: str = "ek"):
        self.formula = f
        self.explicit = explicit
        self.steps: list[tuple] = []
        self._slot: dict[Formula, int] = {}
        self._emit(f)

    def _emit(self, f: Formula) -> int:
        slot = self._slot.get(f)
        if slot is not None:
            return slot
        if isinstance(f, Atom):
            step = ("atom", f.name)
        elif isinstance(f, Not):
            step = ("not", self._emit(f.sub))
        elif isinstance(f, (And, Or, Implies, Iff)):
            op = {And: "and", Or: "or", Implies: "imp", Iff: "iff"}[type(f)]
            step = (op, self._emit(f.left), self._emit(f.right))
        elif isinstance(f, Aware):
            step = ("aware", f.agent, atoms_of(f.sub))
        elif isinstance(f, Implicit):
            step = ("ik", f.agent, self._emit(f.sub))
        elif isinstance(f, SimBox):
            step = ("sim", f.agent, self._emit(f.sub))
        elif isinstance(f, EkBox):
            step = ("ek", f.agent, self._emit(f.sub))
        elif isinstance(f, Explicit):
            step = ("exp", f.agent, atoms_of(f.sub), self._emit(f.sub))
        elif isinstance(f, DYNAMIC):
            # the operand lives in another model, so it gets its own program
            step = ("dyn", f.agent, f.atoms, isinstance(f, AddAware), Program(f.sub, self.explicit))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.steps.append(step)
        slot = len(self.steps) - 1
        self._slot[f] = slot
        return slot

    def truth(self, m: IndexedModel) -> int:
        full = m.full
        n = m.n
        vals: list[int] = []
        push = vals.append
        for step in self.steps:
            op = step[0]
            if op == "atom":
                push(m.val.get(step[1], 0))
            elif op == "not":
                push(full & ~vals[step[1]])
            elif op == "and":
                push(vals[step[1]] & vals[step[2]])
            elif op == "or":
                push(vals[step[1]] | vals[step[2]])
            elif op == "imp":
                push((full & ~vals[step[1]]) | vals[step[2]])
            elif op == "iff":
                push(full & ~(vals[step[1]] ^ vals[step[2]]))
            elif op == "aware":
                push(_aware_mask(m, step[1], step[2]))
            elif op in ("ik", "sim", "ek"):
                agent = step[1]
                if op == "ik":
                    blocks = m.ik[agent]
                elif op == "sim":
                    blocks = m.sim_blocks(agent)
                else:
                    blocks = m.ek_blocks(agent)
                push(_box(blocks, vals[step[2]], n))
            elif op == "exp":
                agent = step[1]
                blocks = m.ek_blocks(agent) if self.explicit == "ek" else m.ik[agent]
                push(_aware_mask(m, agent, step[2]) & _box(blocks, vals[step[3]], n))
            else:  # dyn
                _, agent, q, add, sub = step
                push(sub.truth(m.updated(agent, q, add)))
        return vals[-1]


def _aware_mask(m: IndexedModel, agent: str, atoms: frozenset) -> int:
    out = 0
    for k, a in enumerate(m.aware[agent]):
        if atoms <= a:
            out |= 1 << k
    return out


def _box(blocks: Sequence[int], t: int, n: int) -> int:
    out = 0
    for k in range(n):
        b = blocks[k]
        if t & b == b:
            out |= 1 << k
    return out


# ---------------------------------------------------------------------------
# satisfaction


@dataclass(frozen=True)
class PointedModel:
    model: EpistemicModel
    world: str

    def __post_init__(self):
        if self.world not in self.model.worlds:
            raise FormulaError(f"world {self.world!r} is not in the model")


def check_formula(m: EpistemicModel | IndexedModel, f: Formula) -> None:
    """Raise unless ``f`` only mentions declared atoms and agents."""
    check_dynamic_placement(f)
    extra_atoms = atoms_of(f) - set(m.atoms)
    if extra_atoms:
        raise FormulaError(f"undeclared atoms {sorted(extra_atoms)}")
    extra_agents = agents_of(f) - set(m.agents)
    if extra_agents:
        raise FormulaError(f"undeclared agents {sorted(extra_agents)}")


def truth_set(m: EpistemicModel, f: Formula, explicit: str = "ek") -> frozenset[str]:
    """Worlds of ``m`` where ``f`` holds."""
    check_formula(m, f)
    im = m.indexed
    mask = Program(f, explicit).truth(im)
    return frozenset(w for k, w in enumerate(im.worlds) if mask >> k & 1)


def satisfies(pm: PointedModel, f: Formula) -> bool:
    return pm.world in truth_set(pm.model, f)


def model_valid(m: EpistemicModel, f: Formula) -> bool:
    return truth_set(m, f) == frozenset(m.worlds)


# ---------------------------------------------------------------------------
# bounded countermodel search


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int = 4
    atoms: frozenset | None = None
    agents: frozenset | None = None
    deadline: float | None = None  # seconds of wall-clock budget

    def __post_init__(self):
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")


VALID_UP_TO_BOUND = "valid-up-to-bound"
COUNTERMODEL_FOUND = "countermodel-found"
BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class SearchOutcome:
    verdict: str
    witness: PointedModel | None
    models_checked: int
    max_worlds: int
    closure_size: int | None = None  # 2**closure_size worlds suffice in principle

    def __post_init__(self):
        if (self.witness is not None) != (self.verdict == COUNTERMODEL_FOUND):
            raise ValueError("a witness accompanies exactly the countermodel verdict")

    def summary(self) -> str:
        bound = f"; completeness bound 2^{self.closure_size} worlds" if self.closure_size is not None else ""
        return f"{self.verdict} (max_worlds={self.max_worlds}, models checked: {self.models_checked}{bound})"


def find_countermodel(f: Formula, bounds: SearchBounds = SearchBounds()) -> SearchOutcome:
    """First pointed model in enumeration order falsifying ``f``."""
    check_dynamic_placement(f)
    atoms = atoms_of(f) if bounds.atoms is None else frozenset(bounds.atoms)
    agents = agents_of(f) if bounds.agents is None else frozenset(bounds.agents)
    if not atoms_of(f) <= atoms:
        raise FormulaError(f"formula atoms {sorted(atoms_of(f) - atoms)} outside the search universe")
    if not agents_of(f) <= agents:
        raise FormulaError(f"formula agents {sorted(agents_of(f) - agents)} outside the search universe")
    cl = None if has_dynamic(f) else len(closure_cl(f))
    prog = Program(f)
    stop = None if bounds.deadline is None else time.monotonic() + bounds.deadline
    checked = 0
    for im in enumerate_indexed(atoms, agents, bounds.max_worlds):
        checked += 1
        mask = prog.truth(im)
        if mask != im.full:
            k = ((im.full & ~mask) & -(im.full & ~mask)).bit_length() - 1
            witness = PointedModel(im.to_model(), im.worlds[k])
            if satisfies(witness, f):
                raise AssertionError("countermodel failed re-verification")
            return SearchOutcome(COUNTERMODEL_FOUND, witness, checked, bounds.max_worlds, cl)
        if stop is not None and checked % 512 == 0 and time.monotonic() > stop:
            return SearchOutcome(BUDGET_EXHAUSTED, None, checked, bounds.max_worlds, cl)
    return SearchOutcome(VALID_UP_TO_BOUND, None, checked, bounds.max_worlds, cl)


# ---------------------------------------------------------------------------
# schemata

FORMULA_VARS = frozenset({"phi", "psi", "chi"})


def default_pool(agent: str = "i") -> list[Formula]:
    return [parse(s) for s in ("p", "q", "p & q", f"I[{agent}] p", f"A[{agent}] p")]


def aware_reduction(binding: Mapping[str, Formula], agents: Mapping[str, str]) -> Formula:
    """``A[i] phi <-> A[i] p1 & ... & A[i] pn`` over the atoms of phi."""
    phi = binding["phi"]
    i = agents.get("i", "i")
    rhs = conjunction(Aware(i, Atom(p)) for p in sorted(atoms_of(phi)))
    return Iff(Aware(i, phi), rhs)


BUILTIN_SCHEMAS: dict[str, tuple[tuple[str, ...], tuple[str, ...], Callable]] = {
    "@aware_reduction": (("phi",), ("i",), aware_reduction),
}


@dataclass(frozen=True)
class Schema:
    """A formula pattern over ``phi``/``psi``/``chi`` and agent names."""

    text: str
    formula_vars: tuple[str, ...]
    agent_vars: tuple[str, ...]
    build: Callable[[Mapping[str, Formula], Mapping[str, str]], Formula]

    @classmethod
    def parse(cls, text: str) -> "Schema":
        text = text.strip()
        if text in BUILTIN_SCHEMAS:
            fv, av, build = BUILTIN_SCHEMAS[text]
            return cls(text, fv, av, build)
        pattern = parse(text)
        fv = tuple(sorted(atoms_of(pattern) & FORMULA_VARS))
        av = tuple(sorted(agents_of(pattern)))
        return cls(text, fv, av, lambda b, a: substitute(pattern, b, a))

    def instances(self, pool: Sequence[Formula], agents: Iterable[str]) -> list[Formula]:
        agents = sorted(agents)
        out = []
        for fs in itertools.product(pool, repeat=len(self.formula_vars)):
            for ags in itertools.product(agents, repeat=len(self.agent_vars)):
                out.append(self.build(dict(zip(self.formula_vars, fs)), dict(zip(self.agent_vars, ags))))
        return out


@dataclass
class SchemaReport:
    schema: str
    results: list[tuple[Formula, SearchOutcome]] = field(default_factory=list)

    @property
    def all_valid(self) -> bool:
        return all(o.verdict == VALID_UP_TO_BOUND for _, o in self.results)

    @property
    def refuted(self) -> bool:
        return any(o.verdict == COUNTERMODEL_FOUND for _, o in self.results)

    def verdict(self) -> str:
        if self.refuted:
            return COUNTERMODEL_FOUND
        if self.all_valid:
            return VALID_UP_TO_BOUND
        return BUDGET_EXHAUSTED


def check_schema(
    schema: Schema | str,
    pool: Sequence[Formula] | None = None,
    bounds: SearchBounds = SearchBounds(),
    *,
    agents: Iterable[str] = ("i",),
) -> SchemaReport:
    """Run the countermodel search on every instance of ``schema``.

    Agent metavariables range over ``bounds.agents`` when given, else over
    ``agents``.  The search universe of each instance is its own atoms and
    agents unless ``bounds`` fixes them.
    """
    if isinstance(schema, str):
        schema = Schema.parse(schema)
    if pool is None:
        pool = default_pool()
    agent_range = sorted(bounds.agents) if bounds.agents is not None else sorted(agents)
    report = SchemaReport(schema.text)
    for inst in schema.instances(pool, agent_range):
        report.results.append((inst, find_countermodel(inst, bounds)))
    return report


def formula_text(f: Formula) -> str:
    return to_text(f)
