"""Independent reference implementations used to cross-check the library.

Everything here works on explicit pair sets and plain recursion, with no
sharing of code paths with the bitmask evaluator or the partition join.
"""

from __future__ import annotations

from ail.model import EpistemicModel
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
    SimBox,
    atoms_of,
)


def warshall(worlds, pairs):
    """Transitive closure of ``pairs`` by Warshall's algorithm."""
    worlds = list(worlds)
    idx = {w: k for k, w in enumerate(worlds)}
    n = len(worlds)
    r = [[False] * n for _ in range(n)]
    for a, b in pairs:
        r[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if r[i][k]:
                row_k = r[k]
                row_i = r[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return {(worlds[i], worlds[j]) for i in range(n) for j in range(n) if r[i][j]}


def compose(r1, r2):
    """``{(w, v) : (w, t) in r1 and (t, v) in r2}``."""
    by_first = {}
    for t, v in r2:
        by_first.setdefault(t, set()).add(v)
    return {(w, v) for w, t in r1 for v in by_first.get(t, ())}


def a_equiv_pairs(m: EpistemicModel, i: str):
    """A-equivalence read directly off its definition."""
    out = set()
    for w in m.worlds:
        for v in m.worlds:
            aw, av = m.awareness[i][w], m.awareness[i][v]
            if aw != av:
                continue
            if all((w in m.valuation.get(p, ())) == (v in m.valuation.get(p, ())) for p in aw):
                out.add((w, v))
    return out


def ek_pairs(m: EpistemicModel, i: str, order: str = "sim-then-ik"):
    sim = a_equiv_pairs(m, i)
    ik = set(m.ik[i])
    comp = compose(sim, ik) if order == "sim-then-ik" else compose(ik, sim)
    return warshall(m.worlds, comp)


def is_equivalence(worlds, pairs) -> bool:
    pairs = set(pairs)
    if any((w, w) not in pairs for w in worlds):
        return False
    if any((b, a) not in pairs for a, b in pairs):
        return False
    return compose(pairs, pairs) <= pairs


def _update(m: EpistemicModel, i: str, q, add: bool) -> EpistemicModel:
    aw = {j: dict(m.awareness[j]) for j in m.agents}
    for w in m.worlds:
        aw[i][w] = (aw[i][w] | q) if add else (aw[i][w] - q)
    return EpistemicModel(m.worlds, m.agents, m.atoms, m.valuation, m.ik, aw)


def holds(m: EpistemicModel, w: str, f, fh: bool = False) -> bool:
    """Satisfaction by direct recursion over the clauses, one world at a time."""
    if isinstance(f, Atom):
        return w in m.valuation.get(f.name, ())
    if isinstance(f, Not):
        return not holds(m, w, f.sub, fh)
    if isinstance(f, And):
        return holds(m, w, f.left, fh) and holds(m, w, f.right, fh)
    if isinstance(f, Or):
        return holds(m, w, f.left, fh) or holds(m, w, f.right, fh)
    if isinstance(f, Implies):
        return (not holds(m, w, f.left, fh)) or holds(m, w, f.right, fh)
    if isinstance(f, Iff):
        return holds(m, w, f.left, fh) == holds(m, w, f.right, fh)
    if isinstance(f, Aware):
        return atoms_of(f.sub) <= m.awareness[f.agent][w]
    if isinstance(f, Implicit):
        return all(holds(m, v, f.sub, fh) for (x, v) in m.ik[f.agent] if x == w)
    if isinstance(f, SimBox):
        return all(holds(m, v, f.sub, fh) for (x, v) in a_equiv_pairs(m, f.agent) if x == w)
    if isinstance(f, EkBox):
        return all(holds(m, v, f.sub, fh) for (x, v) in ek_pairs(m, f.agent) if x == w)
    if isinstance(f, Explicit):
        if not holds(m, w, Aware(f.agent, f.sub), fh):
            return False
        box = Implicit if fh else EkBox
        return holds(m, w, box(f.agent, f.sub), fh)
    if isinstance(f, (AddAware, DelAware)):
        m2 = _update(m, f.agent, frozenset(f.atoms), isinstance(f, AddAware))
        return holds(m2, w, f.sub, fh)
    raise TypeError(f)
