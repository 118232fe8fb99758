#!/usr/bin/env python3
"""Measure how often the two awareness-update claims fail on random models,
and which structural feature of the model is present when they do.

The claims are  C[i] phi -> [+At(phi)] E[i] [-At(phi)] phi  and
I[i] phi <-> [+P] E[i] [-P] phi  with P the model's atoms.
"""

import argparse
import random

from ail.checker import PointedModel, satisfies
from ail.model import random_model
from ail.syntax import MODAL, AddAware, DelAware, EkBox, Explicit, Iff, Implicit, Implies, atoms_of, random_formula, to_text


def uniform_awareness(m, i):
    return len({m.awareness[i][w] for w in m.worlds}) == 1


def shared_valuation_across_blocks(m, i):
    part = m.ik_partition(i)
    sig = {w: frozenset(p for p in m.atoms if w in m.valuation[p]) for w in m.worlds}
    return any(sig[w] == sig[v] and not part.related(w, v) for w in m.worlds for v in m.worlds)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", type=int, default=1000)
    ap.add_argument("--max-worlds", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show", type=int, default=3, help="print this many counterexamples per claim")
    args = ap.parse_args()

    atoms, agents = ("p", "q"), ("a", "b")
    fails = {"first": [], "second": []}
    for k in range(args.models):
        rng = random.Random(args.seed + k)
        m = random_model(atoms, agents, rng.randint(1, args.max_worlds), args.seed + k)
        i = rng.choice(agents)
        phi = random_formula(rng, 2, atoms, agents, modal=MODAL)
        at, full = frozenset(atoms_of(phi)), frozenset(m.atoms)
        claims = {
            "first": Implies(EkBox(i, phi), AddAware(i, at, Explicit(i, DelAware(i, at, phi)))),
            "second": Iff(Implicit(i, phi), AddAware(i, full, Explicit(i, DelAware(i, full, phi)))),
        }
        for key, f in claims.items():
            bad = [w for w in m.worlds if not satisfies(PointedModel(m, w), f)]
            if bad:
                fails[key].append((m, i, bad[0], f))

    for key, items in fails.items():
        uni = sum(uniform_awareness(m, i) for m, i, _, _ in items)
        shared = sum(shared_valuation_across_blocks(m, i) for m, i, _, _ in items)
        print(f"{key} claim: falsified on {len(items)}/{args.models} models")
        print(f"  awareness uniform over worlds in {uni}, IK blocks sharing a valuation in {shared}")
        for m, i, w, f in items[: args.show]:
            print(f"  at {w} of {m.to_dict()}:\n    {to_text(f)}")


if __name__ == "__main__":
    main()
