"""Finite epistemic models with awareness and their derived relations."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping

Pair = tuple[str, str]


class ModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# partitions


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smaller index stays representative
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


@dataclass(frozen=True)
class Partition:
    """Equivalence classes over an ordered world list.

    Blocks are ordered by their first world in ``worlds`` order, which is also
    the canonical representative.
    """

    worlds: tuple[str, ...]
    blocks: tuple[frozenset, ...]

    @classmethod
    def from_labels(cls, worlds: tuple[str, ...], labels: Iterable) -> "Partition":
        groups: dict = {}
        for w, lab in zip(worlds, labels):
            groups.setdefault(lab, []).append(w)
        return cls(worlds, tuple(frozenset(g) for g in groups.values()))

    @classmethod
    def from_masks(cls, worlds: tuple[str, ...], masks: Iterable[int]) -> "Partition":
        return cls.from_labels(worlds, masks)

    @cached_property
    def find(self) -> dict[str, int]:
        return {w: k for k, block in enumerate(self.blocks) for w in block}

    def block_of(self, w: str) -> frozenset:
        return self.blocks[self.find[w]]

    def related(self, w: str, v: str) -> bool:
        return self.find[w] == self.find[v]

    def pairs(self) -> frozenset[Pair]:
        return frozenset((w, v) for b in self.blocks for w in b for v in b)

    def coarsens(self, other: "Partition") -> bool:
        """True if every block of ``other`` lies inside one block of self."""
        return all(len({self.find[w] for w in b}) == 1 for b in other.blocks)

    def sorted_blocks(self) -> list[list[str]]:
        order = {w: k for k, w in enumerate(self.worlds)}
        return [sorted(b, key=order.__getitem__) for b in self.blocks]


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class Violation:
    invariant: str
    agent: str | None
    worlds: tuple[str, ...]
    detail: str = ""

    def __str__(self) -> str:
        who = f" agent {self.agent}" if self.agent is not None else ""
        at = f" at ({', '.join(self.worlds)})" if self.worlds else ""
        return f"{self.invariant}:{who}{at} {self.detail}".rstrip()


@dataclass(frozen=True, eq=False)
class EpistemicModel:
    """W, per-agent IK relations and awareness, valuation, and the
    declared atom/agent universes."""

    worlds: tuple[str, ...]
    agents: tuple[str, ...]
    atoms: tuple[str, ...]
    valuation: Mapping[str, frozenset]
    ik: Mapping[str, frozenset]
    awareness: Mapping[str, Mapping[str, frozenset]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, EpistemicModel):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    @classmethod
    def build(
        cls,
        worlds: Iterable[str],
        agents: Iterable[str],
        atoms: Iterable[str],
        valuation: Mapping[str, Iterable[str]],
        ik: Mapping[str, Iterable],
        awareness: Mapping[str, Mapping[str, Iterable[str]] | Iterable[str]],
        *,
        close_ik: bool = False,
    ) -> "EpistemicModel":
        """Convenience constructor.

        ``ik[i]`` is a list of pairs; with ``close_ik`` its reflexive,
        symmetric, transitive closure is taken.  ``awareness[i]`` may be a
        single atom set used at every world.
        """
        worlds = tuple(worlds)
        agents = tuple(agents)
        atoms = tuple(atoms)
        val = {p: frozenset(valuation.get(p, ())) for p in atoms}
        val.update({p: frozenset(s) for p, s in valuation.items() if p not in val})
        rel = {}
        for i in agents:
            pairs = [tuple(x) for x in ik.get(i, ())]
            if close_ik:
                rel[i] = close_equivalence(worlds, pairs)
            else:
                rel[i] = frozenset(pairs)
        aw = {}
        for i in agents:
            spec = awareness.get(i, ())
            if isinstance(spec, Mapping):
                aw[i] = {w: frozenset(spec.get(w, ())) for w in worlds}
            else:
                s = frozenset(spec)
                aw[i] = {w: s for w in worlds}
        return cls(worlds, agents, atoms, val, rel, aw)

    @classmethod
    def from_partitions(
        cls,
        worlds: Iterable[str],
        agents: Iterable[str],
        atoms: Iterable[str],
        valuation: Mapping[str, Iterable[str]],
        partitions: Mapping[str, Iterable[Iterable[str]]],
        awareness: Mapping[str, Mapping[str, Iterable[str]] | Iterable[str]],
    ) -> "EpistemicModel":
        ik = {i: [(w, v) for b in partitions[i] for w in b for v in b] for i in partitions}
        return cls.build(worlds, agents, atoms, valuation, ik, awareness)

    # -- json ---------------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping, *, close_ik: bool = False) -> "EpistemicModel":
        try:
            worlds = list(data["worlds"])
            agents = list(data["agents"])
            atoms = list(data["atoms"])
            ik_in = data["ik"]
            ik = {}
            for i, spec in ik_in.items():
                if isinstance(spec, Mapping):
                    if "blocks" in spec:
                        ik[i] = [(w, v) for b in spec["blocks"] for w in b for v in b]
                        continue
                    pairs = [tuple(p) for p in spec.get("pairs", [])]
                    closed = spec.get("closed", True)
                else:
                    pairs, closed = [tuple(p) for p in spec], True
                if not closed or close_ik:
                    pairs = sorted(close_equivalence(worlds, pairs))
                ik[i] = pairs
            return cls.build(worlds, agents, atoms, data.get("valuation", {}), ik, data.get("awareness", {}))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ModelError(f"malformed model description: {exc!r}") from exc

    @classmethod
    def load(cls, path: str | Path, *, close_ik: bool = False) -> "EpistemicModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), close_ik=close_ik)

    def to_dict(self) -> dict:
        order = {w: k for k, w in enumerate(self.worlds)}

        def ws(s):
            return sorted(s, key=lambda w: order.get(w, len(order)))

        return {
            "worlds": list(self.worlds),
            "agents": list(self.agents),
            "atoms": list(self.atoms),
            "valuation": {p: ws(self.valuation.get(p, ())) for p in self.atoms},
            "ik": {
                i: {"pairs": sorted(self.ik[i], key=lambda e: (order.get(e[0], -1), order.get(e[1], -1))), "closed": True}
                for i in self.agents
            },
            "awareness": {
                i: {w: sorted(self.awareness[i].get(w, ())) for w in self.worlds} for i in self.agents
            },
        }

    # -- derived ------------------------------------------------------------

    @cached_property
    def indexed(self) -> "IndexedModel":
        problems = validate_model(self)
        if problems:
            raise ModelError("invalid model: " + "; ".join(map(str, problems)))
        idx = {w: k for k, w in enumerate(self.worlds)}
        val = {p: _mask(idx[w] for w in self.valuation.get(p, ())) for p in self.atoms}
        ik = {}
        for i in self.agents:
            blocks = [1 << k for k in range(len(self.worlds))]
            for w, v in self.ik[i]:
                blocks[idx[w]] |= 1 << idx[v]
            ik[i] = tuple(blocks)
        aware = {i: tuple(self.awareness[i][w] for w in self.worlds) for i in self.agents}
        return IndexedModel(self.worlds, self.agents, self.atoms, val, ik, aware)

    @cached_property
    def derived(self) -> "DerivedRelations":
        m = self.indexed
        return DerivedRelations(
            {i: Partition.from_masks(self.worlds, m.sim_blocks(i)) for i in self.agents},
            {i: Partition.from_masks(self.worlds, m.ek_blocks(i)) for i in self.agents},
        )

    def ik_partition(self, agent: str) -> Partition:
        return Partition.from_masks(self.worlds, self.indexed.ik[agent])


@dataclass(frozen=True)
class DerivedRelations:
    a_equiv: dict[str, Partition]
    ek: dict[str, Partition]


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for k in indices:
        m |= 1 << k
    return m


def close_equivalence(worlds: Iterable[str], pairs: Iterable[Pair]) -> frozenset[Pair]:
    """Reflexive, symmetric, transitive closure of ``pairs`` over ``worlds``."""
    worlds = list(worlds)
    idx = {w: k for k, w in enumerate(worlds)}
    uf = UnionFind(len(worlds))
    for w, v in pairs:
        if w not in idx or v not in idx:
            raise ModelError(f"pair ({w}, {v}) mentions an unknown world")
        uf.union(idx[w], idx[v])
    return frozenset(
        (w, v) for w in worlds for v in worlds if uf.find(idx[w]) == uf.find(idx[v])
    )


class IndexedModel:
    """Integer-indexed view of a model used for evaluation.

    World ``k`` is bit ``k``; ``val[p]`` is the mask of worlds where p holds
    and ``ik[i][k]`` the mask of the IK block of world ``k``.
    """

    __slots__ = ("worlds", "agents", "atoms", "n", "full", "val", "ik", "aware", "_sim", "_ek")

    def __init__(self, worlds, agents, atoms, val, ik, aware):
        self.worlds = tuple(worlds)
        self.agents = tuple(agents)
        self.atoms = tuple(atoms)
        self.n = len(self.worlds)
        self.full = (1 << self.n) - 1
        self.val = val
        self.ik = ik
        self.aware = aware
        self._sim: dict[str, tuple[int, ...]] = {}
        self._ek: dict[str, tuple[int, ...]] = {}

    def sim_blocks(self, agent: str) -> tuple[int, ...]:
        """Per world, the mask of its awareness-equivalence class."""
        blocks = self._sim.get(agent)
        if blocks is None:
            aware = self.aware[agent]
            keys = []
            for k in range(self.n):
                a = aware[k]
                keys.append((a, frozenset(p for p in a if self.val.get(p, 0) >> k & 1)))
            groups: dict = {}
            for k, key in enumerate(keys):
                groups[key] = groups.get(key, 0) | (1 << k)
            blocks = tuple(groups[key] for key in keys)
            self._sim[agent] = blocks
        return blocks

    def ek_blocks(self, agent: str) -> tuple[int, ...]:
        """Per world, the mask of its class in the join of IK and A-equivalence."""
        blocks = self._ek.get(agent)
        if blocks is None:
            comps = list(dict.fromkeys(self.ik[agent]))
            for s in dict.fromkeys(self.sim_blocks(agent)):
                hit = 0
                rest = []
                for c in comps:
                    if c & s:
                        hit |= c
                    else:
                        rest.append(c)
                rest.append(hit)
                comps = rest
            per_world = [0] * self.n
            for c in comps:
                for k in range(self.n):
                    if c >> k & 1:
                        per_world[k] = c
            blocks = tuple(per_world)
            self._ek[agent] = blocks
        return blocks

    def updated(self, agent: str, atoms: frozenset, add: bool) -> "IndexedModel":
        aware = dict(self.aware)
        if add:
            aware[agent] = tuple(a | atoms for a in self.aware[agent])
        else:
            aware[agent] = tuple(a - atoms for a in self.aware[agent])
        return IndexedModel(self.worlds, self.agents, self.atoms, self.val, self.ik, aware)

    def to_model(self) -> EpistemicModel:
        val = {p: frozenset(self.worlds[k] for k in range(self.n) if self.val.get(p, 0) >> k & 1) for p in self.atoms}
        ik = {
            i: frozenset(
                (self.worlds[k], self.worlds[j])
                for k in range(self.n)
                for j in range(self.n)
                if self.ik[i][k] >> j & 1
            )
            for i in self.agents
        }
        aw = {i: {self.worlds[k]: self.aware[i][k] for k in range(self.n)} for i in self.agents}
        return EpistemicModel(self.worlds, self.agents, self.atoms, val, ik, aw)


# ---------------------------------------------------------------------------
# operations


def validate_model(m: EpistemicModel) -> list[Violation]:
    """All broken structural invariants; empty means the model is valid."""
    out: list[Violation] = []
    worlds = set(m.worlds)
    order = {w: k for k, w in enumerate(m.worlds)}
    atoms = set(m.atoms)
    if not m.worlds:
        out.append(Violation("nonempty", None, (), "no worlds"))
    if len(worlds) != len(m.worlds):
        out.append(Violation("distinct-worlds", None, (), "duplicate world ids"))
    for p, ws in m.valuation.items():
        if p not in atoms:
            out.append(Violation("valuation-atoms", None, (), f"undeclared atom {p}"))
        extra = set(ws) - worlds
        if extra:
            out.append(Violation("valuation-worlds", None, tuple(sorted(extra)), f"atom {p}"))
    for i in m.agents:
        rel = m.ik.get(i)
        if rel is None:
            out.append(Violation("ik-missing", i, (), "no IK relation"))
            continue
        aw = m.awareness.get(i, {})
        bad = {w for pair in rel for w in pair} - worlds
        if bad:
            out.append(Violation("ik-worlds", i, tuple(sorted(bad)), "unknown worlds"))
            continue
        for w in m.worlds:
            if (w, w) not in rel:
                out.append(Violation("reflexive", i, (w,)))
        for w, v in sorted(rel):
            if (v, w) not in rel:
                out.append(Violation("symmetric", i, (w, v)))
        succ: dict[str, set] = {}
        for w, v in rel:
            succ.setdefault(w, set()).add(v)
        for w, v in sorted(rel):
            for u in sorted(succ.get(v, ())):
                if (w, u) not in rel:
                    out.append(Violation("transitive", i, (w, v, u)))
        for w in m.worlds:
            if w not in aw:
                out.append(Violation("awareness-missing", i, (w,)))
            elif not set(aw[w]) <= atoms:
                extra = sorted(set(aw[w]) - atoms)
                out.append(Violation("awareness-atoms", i, (w,), f"undeclared {extra}"))
        for w, v in sorted(rel):
            if order[w] < order[v] and w in aw and v in aw and aw[w] != aw[v]:
                out.append(Violation("ka", i, (w, v), "awareness differs across IK-related worlds"))
    for i in m.ik:
        if i not in m.agents:
            out.append(Violation("ik-agents", i, (), "undeclared agent"))
    return out


def a_equivalence(m: EpistemicModel, agent: str) -> Partition:
    return m.derived.a_equiv[agent]


def ek_accessibility(m: EpistemicModel, agent: str) -> Partition:
    return m.derived.ek[agent]


def update_awareness(m: EpistemicModel, agent: str, atoms: Iterable[str], direction: str) -> EpistemicModel:
    """Uniformly add (``"add"``) or remove (``"remove"``) ``atoms`` from the
    agent's awareness at every world."""
    q = frozenset(atoms)
    unknown = q - set(m.atoms)
    if unknown:
        raise ModelError(f"unknown atoms {sorted(unknown)}")
    if agent not in m.agents:
        raise ModelError(f"unknown agent {agent}")
    if direction not in ("add", "remove"):
        raise ValueError(f"direction must be 'add' or 'remove', not {direction!r}")
    aw = dict(m.awareness)
    if direction == "add":
        aw[agent] = {w: a | q for w, a in m.awareness[agent].items()}
    else:
        aw[agent] = {w: a - q for w, a in m.awareness[agent].items()}
    return EpistemicModel(m.worlds, m.agents, m.atoms, m.valuation, m.ik, aw)


# ---------------------------------------------------------------------------
# enumeration and random generation


def world_names(n: int) -> tuple[str, ...]:
    return tuple(f"w{k}" for k in range(n))


def set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield ()
        return

    def rec(prefix: list[int], top: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()

    yield from rec([0], 0)


def _blocks_of(labels: tuple[int, ...]) -> tuple[int, ...]:
    masks: dict[int, int] = {}
    for k, lab in enumerate(labels):
        masks[lab] = masks.get(lab, 0) | (1 << k)
    return tuple(masks[lab] for lab in labels)


def _subsets(atoms: tuple[str, ...]) -> list[frozenset]:
    return [frozenset(a for k, a in enumerate(atoms) if bits >> k & 1) for bits in range(1 << len(atoms))]


def enumerate_indexed(atoms: Iterable[str], agents: Iterable[str], max_worlds: int) -> Iterator[IndexedModel]:
    """Every model with 1..max_worlds worlds, in deterministic order.

    World counts ascend; within a count, valuations vary slowest, then the
    IK partitions (agent by agent), then awareness per IK block.
    """
    atoms = tuple(sorted(atoms))
    agents = tuple(sorted(agents))
    subsets = _subsets(atoms)
    for n in range(1, max_worlds + 1):
        worlds = world_names(n)
        parts = [(_blocks_of(lab), max(lab) + 1, lab) for lab in set_partitions(n)]
        for vals in itertools.product(range(1 << n), repeat=len(atoms)):
            val = dict(zip(atoms, vals))
            for choice in itertools.product(parts, repeat=len(agents)):
                aw_options = [
                    itertools.product(subsets, repeat=nblocks) for _, nblocks, _ in choice
                ]
                for aw_choice in itertools.product(*aw_options):
                    ik = {}
                    aware = {}
                    for agent, (blocks, _, lab), per_block in zip(agents, choice, aw_choice):
                        ik[agent] = blocks
                        aware[agent] = tuple(per_block[b] for b in lab)
                    yield IndexedModel(worlds, agents, atoms, val, ik, aware)


def enumerate_models(atoms: Iterable[str], agents: Iterable[str], max_worlds: int) -> Iterator[EpistemicModel]:
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    for im in enumerate_indexed(atoms, agents, max_worlds):
        yield im.to_model()


def random_indexed(
    atoms: Iterable[str],
    agents: Iterable[str],
    n_worlds: int,
    rng: random.Random,
    *,
    aware_p: float = 0.6,
) -> IndexedModel:
    atoms = tuple(sorted(atoms))
    agents = tuple(sorted(agents))
    val = {p: rng.getrandbits(n_worlds) for p in atoms}
    ik, aware = {}, {}
    for i in agents:
        labels: list[int] = []
        top = -1
        for _ in range(n_worlds):
            b = rng.randint(0, top + 1)
            top = max(top, b)
            labels.append(b)
        per_block = [frozenset(p for p in atoms if rng.random() < aware_p) for _ in range(top + 1)]
        ik[i] = _blocks_of(tuple(labels))
        aware[i] = tuple(per_block[b] for b in labels)
    return IndexedModel(world_names(n_worlds), agents, atoms, val, ik, aware)


def random_model(atoms: Iterable[str], agents: Iterable[str], n_worlds: int, seed: int) -> EpistemicModel:
    """A valid random model; equal seeds give equal models."""
    if n_worlds < 1:
        raise ValueError("n_worlds must be at least 1")
    return random_indexed(atoms, agents, n_worlds, random.Random(seed)).to_model()
