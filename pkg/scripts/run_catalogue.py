#!/usr/bin/env python3
"""Run a schema catalogue through bounded countermodel search and print a
verdict table, optionally writing every countermodel to a JSON file."""

import argparse
import json
import time

from ail.catalogue import CATALOGUE_POOL, load_catalogue, run_catalogue
from ail.checker import COUNTERMODEL_FOUND
from ail.syntax import parse, to_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--catalogue", default="section34")
    ap.add_argument("--max-worlds", type=int, default=4)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--pool", nargs="*", default=list(CATALOGUE_POOL), help="instantiation pool formulas")
    ap.add_argument("--out", help="write per-instance outcomes and witnesses here")
    args = ap.parse_args()

    t0 = time.perf_counter()
    rows = run_catalogue(
        load_catalogue(args.catalogue), [parse(s) for s in args.pool], args.max_worlds, workers=args.workers
    )
    width = max(len(r.entry.name) for r in rows)
    for r in rows:
        n = len(r.report.results)
        refuted = sum(o.verdict == COUNTERMODEL_FOUND for _, o in r.report.results)
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark}  {r.entry.name:<{width}}  expected {r.entry.expected:<7}  {refuted}/{n} instances refuted")
    print(f"{sum(r.passed for r in rows)}/{len(rows)} rows as expected in {time.perf_counter() - t0:.1f} s")

    if args.out:
        dump = []
        for r in rows:
            for f, o in r.report.results:
                item = {"row": r.entry.name, "instance": to_text(f), "verdict": o.verdict, "models_checked": o.models_checked}
                if o.witness is not None:
                    item["witness"] = {"world": o.witness.world, "model": o.witness.model.to_dict()}
                dump.append(item)
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(dump, fh, indent=1, ensure_ascii=False)


if __name__ == "__main__":
    main()
