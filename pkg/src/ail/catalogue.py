"""Schema catalogues with expected verdicts, run through bounded search."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

from .checker import (
    COUNTERMODEL_FOUND,
    VALID_UP_TO_BOUND,
    Schema,
    SchemaReport,
    SearchBounds,
    find_countermodel,
)
from .syntax import Formula, parse

CATALOGUE_POOL = ("p", "q", "p & q", "I[i] p")


@dataclass(frozen=True)
class Entry:
    name: str
    expected: str  # "valid" or "invalid"
    schema: str


@dataclass
class Row:
    entry: Entry
    report: SchemaReport

    @property
    def verdict(self) -> str:
        return self.report.verdict()

    @property
    def passed(self) -> bool:
        want = VALID_UP_TO_BOUND if self.entry.expected == "valid" else COUNTERMODEL_FOUND
        return self.verdict == want


def parse_catalogue(text: str) -> list[Entry]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, expected, schema = (part.strip() for part in line.split("|", 2))
        if expected not in ("valid", "invalid"):
            raise ValueError(f"bad expectation {expected!r} in {raw!r}")
        out.append(Entry(name, expected, schema))
    return out


def load_catalogue(name: str = "section34") -> list[Entry]:
    text = resources.files("ail.data").joinpath(f"catalogue_{name}.txt").read_text(encoding="utf-8")
    return parse_catalogue(text)


def _search(args):
    f, bounds = args
    return find_countermodel(f, bounds)


def run_catalogue(
    entries: Sequence[Entry],
    pool: Sequence[Formula] | None = None,
    max_worlds: int = 4,
    *,
    agents: Sequence[str] = ("i",),
    workers: int = 1,
) -> list[Row]:
    """Check every entry on every instance over ``pool``.

    With ``workers > 1`` instances are searched in parallel; each search is
    itself sequential, so witnesses do not depend on scheduling.
    """
    if pool is None:
        pool = [parse(s) for s in CATALOGUE_POOL]
    bounds = SearchBounds(max_worlds=max_worlds)
    jobs = []
    for e in entries:
        for inst in Schema.parse(e.schema).instances(pool, agents):
            jobs.append((e, inst))
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            outcomes = list(ex.map(_search, [(inst, bounds) for _, inst in jobs], chunksize=1))
    else:
        outcomes = [find_countermodel(inst, bounds) for _, inst in jobs]
    rows = {e.name: Row(e, SchemaReport(e.schema)) for e in entries}
    for (e, inst), out in zip(jobs, outcomes):
        rows[e.name].report.results.append((inst, out))
    return [rows[e.name] for e in entries]
