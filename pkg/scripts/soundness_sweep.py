#!/usr/bin/env python3
"""Check random instances of every axiom schema on random models and report
falsifications per schema."""

import argparse
import random
from collections import Counter

from ail.model import random_model
from ail.proof import AXIOMS, instantiate_axiom
from ail.checker import model_valid
from ail.syntax import MODAL, parse, random_formula, to_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=10_000)
    ap.add_argument("--max-worlds", type=int, default=5)
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    agents = ("a", "b")
    tried, failed = Counter(), Counter()
    first = {}
    for _ in range(args.pairs):
        atoms = ("p", "q", "r")[: rng.randint(1, 3)]
        m = random_model(atoms, agents, rng.randint(1, args.max_worlds), rng.randrange(2**32))
        name = rng.choice(sorted(AXIOMS))
        if name == "AA≈":
            fs = {"p": parse(rng.choice(atoms))}
        else:
            fs = {v: random_formula(rng, args.depth, atoms, agents, modal=MODAL) for v in ("phi", "psi")}
        f = instantiate_axiom(name, fs, {"i": rng.choice(agents), "j": rng.choice(agents)})
        tried[name] += 1
        if not model_valid(m, f):
            failed[name] += 1
            first.setdefault(name, to_text(f))
    for name in sorted(AXIOMS):
        print(f"{name:<6} {tried[name]:>6} instances  {failed[name]} falsified")
    for name, text in first.items():
        print(f"  first failure of {name}: {text}")
    print(f"total: {sum(tried.values())} pairs, {sum(failed.values())} falsified")


if __name__ == "__main__":
    main()
