"""The Fagin-Halpern fragment: its satisfaction, the translation into the
full language, bisimulation, and the separation witness."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .checker import PointedModel, Program, check_formula
from .model import EpistemicModel, IndexedModel
from .syntax import (
    BINARY,
    And,
    Atom,
    Aware,
    EkBox,
    Explicit,
    Formula,
    Implicit,
    Not,
    Or,
    SimBox,
    DYNAMIC,
    children,
    to_text,
)


class NotFhFormula(ValueError):
    pass


def is_fh(f: Formula) -> bool:
    if isinstance(f, (SimBox, EkBox) + DYNAMIC):
        return False
    return all(is_fh(c) for c in children(f))


def _require_fh(f: Formula) -> None:
    if not is_fh(f):
        raise NotFhFormula(f"not in the FH fragment: {to_text(f)}")


def fh_truth_set(m: EpistemicModel, f: Formula) -> frozenset[str]:
    _require_fh(f)
    check_formula(m, f)
    im = m.indexed
    mask = Program(f, explicit="ik").truth(im)
    return frozenset(w for k, w in enumerate(im.worlds) if mask >> k & 1)


def satisfies_fh(pm: PointedModel, f: Formula) -> bool:
    """FH satisfaction: ``E`` is read as awareness plus implicit knowledge."""
    return pm.world in fh_truth_set(pm.model, f)


def translate(f: Formula) -> Formula:
    """Replace every FH ``E[i] phi`` by ``A[i] t(phi) & I[i] t(phi)``."""
    _require_fh(f)
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(translate(f.sub))
    if isinstance(f, BINARY):
        return type(f)(translate(f.left), translate(f.right))
    sub = translate(f.sub)
    if isinstance(f, Explicit):
        return And(Aware(f.agent, sub), Implicit(f.agent, sub))
    return type(f)(f.agent, sub)


# ---------------------------------------------------------------------------
# bisimulation


@dataclass(frozen=True)
class BisimViolation:
    pair: tuple[str, str]
    agent: str | None
    clause: int  # 1 atoms, 2 forth, 3 back, 4 awareness
    detail: str

    def __str__(self) -> str:
        who = f", agent {self.agent}" if self.agent else ""
        return f"clause {self.clause} fails at {self.pair}{who}: {self.detail}"


def _shared(m: EpistemicModel, m2: EpistemicModel) -> tuple[list[str], list[str]]:
    if set(m.agents) != set(m2.agents):
        raise ValueError("models must share their agents")
    return sorted(set(m.atoms) | set(m2.atoms)), sorted(m.agents)


def _true(m: EpistemicModel, p: str, w: str) -> bool:
    return w in m.valuation.get(p, ())


def _local(m, m2, w, w2, atoms, agents) -> BisimViolation | None:
    for p in atoms:
        if _true(m, p, w) != _true(m2, p, w2):
            return BisimViolation((w, w2), None, 1, f"atom {p} differs")
    for i in agents:
        if m.awareness[i][w] != m2.awareness[i][w2]:
            return BisimViolation((w, w2), i, 4, "awareness sets differ")
    return None


def is_bisimulation(m: EpistemicModel, m2: EpistemicModel, pairs) -> BisimViolation | None:
    """None if ``pairs`` satisfies all four clauses, else the first failure."""
    atoms, agents = _shared(m, m2)
    rel = set(map(tuple, pairs))
    for w, w2 in sorted(rel):
        if w not in m.worlds or w2 not in m2.worlds:
            return BisimViolation((w, w2), None, 0, "unknown world")
        bad = _local(m, m2, w, w2, atoms, agents)
        if bad:
            return bad
        for i in agents:
            blk = m.ik_partition(i).block_of(w)
            blk2 = m2.ik_partition(i).block_of(w2)
            for v in sorted(blk):
                if not any((v, v2) in rel for v2 in blk2):
                    return BisimViolation((w, w2), i, 2, f"no partner for {v}")
            for v2 in sorted(blk2):
                if not any((v, v2) in rel for v in blk):
                    return BisimViolation((w, w2), i, 3, f"no partner for {v2}")
    return None


def largest_bisimulation(m: EpistemicModel, m2: EpistemicModel) -> frozenset[tuple[str, str]]:
    """Greatest fixpoint: drop pairs failing forth or back until stable."""
    atoms, agents = _shared(m, m2)
    rel = {
        (w, w2)
        for w in m.worlds
        for w2 in m2.worlds
        if _local(m, m2, w, w2, atoms, agents) is None
    }
    blocks = {i: m.ik_partition(i) for i in agents}
    blocks2 = {i: m2.ik_partition(i) for i in agents}
    changed = True
    while changed:
        changed = False
        for w, w2 in sorted(rel):
            ok = True
            for i in agents:
                blk = blocks[i].block_of(w)
                blk2 = blocks2[i].block_of(w2)
                if not all(any((v, v2) in rel for v2 in blk2) for v in blk) or not all(
                    any((v, v2) in rel for v in blk) for v2 in blk2
                ):
                    ok = False
                    break
            if not ok:
                rel.discard((w, w2))
                changed = True
    return frozenset(rel)


def find_bisimulation(pm: PointedModel, pm2: PointedModel) -> frozenset[tuple[str, str]] | None:
    rel = largest_bisimulation(pm.model, pm2.model)
    if (pm.world, pm2.world) not in rel:
        return None
    assert is_bisimulation(pm.model, pm2.model, rel) is None
    return rel


# ---------------------------------------------------------------------------
# FH formulas up to a modal depth


def fh_formulas(atoms, agents, depth: int) -> Iterator[Formula]:
    """Deterministic finite slice of the FH language up to ``depth``.

    Depth 0 holds the literals and the conjunctions and disjunctions of two
    distinct literals; each further level adds ``O[i] f`` and ``~O[i] f`` for
    ``O`` in A, I, E, every agent and every formula of the previous level.
    """
    lits: list[Formula] = []
    for p in sorted(atoms):
        lits += [Atom(p), Not(Atom(p))]
    level: list[Formula] = list(lits)
    for a, b in itertools.combinations(lits, 2):
        level += [And(a, b), Or(a, b)]
    yield from level
    for _ in range(depth):
        nxt = []
        for f in level:
            for cls in (Aware, Implicit, Explicit):
                for i in sorted(agents):
                    g = cls(i, f)
                    nxt += [g, Not(g)]
        yield from nxt
        level = nxt


def fh_agree_up_to_depth(pm: PointedModel, pm2: PointedModel, depth: int) -> Formula | None:
    """None if both pointed models agree on every formula of
    :func:`fh_formulas`; otherwise the first distinguishing formula."""
    m, m2 = pm.model, pm2.model
    atoms, agents = _shared(m, m2)
    im, im2 = _padded(m, atoms), _padded(m2, atoms)
    k = m.worlds.index(pm.world)
    k2 = m2.worlds.index(pm2.world)
    for f in fh_formulas(atoms, agents, depth):
        a = Program(f, explicit="ik").truth(im) >> k & 1
        b = Program(f, explicit="ik").truth(im2) >> k2 & 1
        if a != b:
            return f
    return None


def _padded(m: EpistemicModel, atoms):
    # atoms missing from a model are false everywhere there
    im = m.indexed
    if set(atoms) <= set(im.atoms):
        return im
    val = {p: im.val.get(p, 0) for p in atoms}
    return IndexedModel(im.worlds, im.agents, tuple(atoms), val, im.ik, im.aware)


# ---------------------------------------------------------------------------
# the separation pair


def separation_pair() -> tuple[PointedModel, PointedModel]:
    """A three-world and a one-world model, bisimilar at their points, that
    disagree on ``E[i] p``.

    In the three-world model ``w`` and ``v`` agree on the only aware atom
    ``p`` while ``v`` is IK-linked to ``u`` where ``p`` fails, so the EK
    class of ``w`` reaches a ``~p`` world.
    """
    m = EpistemicModel.build(
        ["w", "v", "u"],
        ["i"],
        ["p", "q"],
        {"p": ["w", "v"], "q": ["w"]},
        {"i": [("v", "u")]},
        {"i": ["p"]},
        close_ik=True,
    )
    m2 = EpistemicModel.build(["w2"], ["i"], ["p", "q"], {"p": ["w2"], "q": ["w2"]}, {"i": []}, {"i": ["p"]}, close_ik=True)
    return PointedModel(m, "w"), PointedModel(m2, "w2")
