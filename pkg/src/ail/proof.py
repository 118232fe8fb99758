"""Hilbert-style proof checking for the system AIL."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .syntax import (
    BINARY,
    And,
    Atom,
    EkBox,
    Formula,
    Implicit,
    Implies,
    Not,
    Or,
    ParseError,
    SimBox,
    UnsupportedFormula,
    desugar,
    has_dynamic,
    match,
    parse,
    substitute,
    to_text,
)

# name -> pattern text; phi/psi are formula metavariables, p an atom
# metavariable, i/j agent metavariables
AXIOMS: dict[str, str] = {
    "AN": "A[i] phi <-> A[i] ~phi",
    "AC": "A[i](phi & psi) <-> A[i] phi & A[i] psi",
    "AA": "A[i] phi <-> A[i] A[j] phi",
    "AI": "A[i] phi <-> A[i] I[j] phi",
    "A≈": "A[i] phi <-> A[i] S[j] phi",
    "A∘⁺": "A[i] phi <-> A[i] C[j] phi",
    "AE": "A[i] phi <-> A[i] E[j] phi",
    "IA": "A[i] phi -> I[i] A[i] phi",
    "INA": "~A[i] phi -> I[i] ~A[i] phi",
    "AA≈": "A[i] p & p -> S[i] p",
    "K_I": "I[i](phi -> psi) -> (I[i] phi -> I[i] psi)",
    "T_I": "I[i] phi -> phi",
    "5_I": "~I[i] phi -> I[i] ~I[i] phi",
    "K_≈": "S[i](phi -> psi) -> (S[i] phi -> S[i] psi)",
    "T_≈": "S[i] phi -> phi",
    "5_≈": "~S[i] phi -> S[i] ~S[i] phi",
    "K_∘⁺": "C[i](phi -> psi) -> (C[i] phi -> C[i] psi)",
    "MIX": "C[i] phi -> phi & S[i] I[i] C[i] phi",
    "IND": "C[i](phi -> S[i] I[i] phi) -> (phi -> C[i] phi)",
    "EA∘⁺": "E[i] phi <-> A[i] phi & C[i] phi",
}

ALIASES = {
    "A_SIM": "A≈",
    "A_EK": "A∘⁺",
    "A[∘⁺]M": "A∘⁺",
    "AA_SIM": "AA≈",
    "K_SIM": "K_≈",
    "T_SIM": "T_≈",
    "5_SIM": "5_≈",
    "K_EK": "K_∘⁺",
    "EA_EK": "EA∘⁺",
}

_FORMULA_VARS = frozenset({"phi", "psi"})
_ATOM_VARS = frozenset({"p"})
_PATTERNS = {name: parse(text) for name, text in AXIOMS.items()}
_DESUGARED = {name: desugar(pat) for name, pat in _PATTERNS.items()}

MAX_TAUT_VARS = 20


class CapacityError(ValueError):
    pass


def canonical_axiom(name: str) -> str | None:
    name = ALIASES.get(name, name)
    return name if name in AXIOMS else None


def _clean(binding: dict) -> dict:
    out = {}
    for k, v in binding.items():
        if isinstance(k, tuple):
            out[k[1]] = v
        else:
            out[k] = v
    return out


def match_axiom(f: Formula) -> list[tuple[str, dict]]:
    """Schemata (other than TAUT) with ``f`` as an instance.

    The substitution maps metavariable names to formulas and agent
    metavariables to agent names.  A schema also matches when the desugared
    formula is an instance of the desugared pattern.
    """
    if has_dynamic(f):
        return []
    plain = desugar(f)
    out = []
    for name, pat in _PATTERNS.items():
        b = match(pat, f, _FORMULA_VARS, _ATOM_VARS)
        if b is None:
            b = match(_DESUGARED[name], plain, _FORMULA_VARS, _ATOM_VARS)
        if b is not None:
            out.append((name, _clean(b)))
    return out


# ---------------------------------------------------------------------------
# tautologies


def _abstract(f: Formula, table: dict[Formula, int]) -> Formula:
    if isinstance(f, Not):
        return Not(_abstract(f.sub, table))
    if isinstance(f, BINARY):
        return type(f)(_abstract(f.left, table), _abstract(f.right, table))
    k = table.setdefault(f, len(table))
    return Atom(f"x{k}")


def propositional_skeleton(f: Formula) -> tuple[Formula, dict[Formula, int]]:
    """``f`` with maximal non-Boolean subformulas replaced by ``x0, x1, ...``."""
    table: dict[Formula, int] = {}
    return _abstract(f, table), table


def is_tautology_instance(f: Formula) -> bool:
    """Truth-table check of the propositional skeleton of ``f``.

    All 2**n rows are evaluated at once: variable ``k`` is the integer whose
    bit ``r`` is bit ``k`` of ``r``.
    """
    skel, table = propositional_skeleton(f)
    n = len(table)
    if n > MAX_TAUT_VARS:
        raise CapacityError(f"{n} abstracted subformulas exceed the limit of {MAX_TAUT_VARS}")
    rows = 1 << n
    full = (1 << rows) - 1
    cols = []
    for k in range(n):
        # blocks of 2**k zeros then 2**k ones, repeated
        block = ((1 << (1 << k)) - 1) << (1 << k)
        period = 1 << (k + 1)
        cols.append(block * (full // ((1 << period) - 1)))

    def ev(g: Formula) -> int:
        if isinstance(g, Atom):
            return cols[int(g.name[1:])]
        if isinstance(g, Not):
            return full & ~ev(g.sub)
        a, b = ev(g.left), ev(g.right)
        if isinstance(g, And):
            return a & b
        if isinstance(g, Or):
            return a | b
        if isinstance(g, Implies):
            return (full & ~a) | b
        return full & ~(a ^ b)

    return ev(skel) == full


# ---------------------------------------------------------------------------
# proofs


@dataclass(frozen=True)
class Justification:
    kind: str  # "axiom", "taut", "mp", "gi", "gsim", "gek"
    axiom: str | None = None
    cites: tuple[int, ...] = ()
    agent: str | None = None

    @classmethod
    def from_json(cls, by) -> "Justification":
        if by == "taut" or by == "TAUT":
            return cls("taut")
        if not isinstance(by, Mapping) or len(by) != 1:
            raise ValueError(f"bad justification {by!r}")
        (key, val), = by.items()
        key = key.lower()
        if key == "axiom":
            if val in ("TAUT", "taut"):
                return cls("taut")
            return cls("axiom", axiom=val)
        if key == "taut":
            return cls("taut")
        if key == "mp":
            if isinstance(val, Mapping):
                val = val["from"]
            j, k = val
            return cls("mp", cites=(int(j), int(k)))
        if key in ("gi", "gsim", "gek"):
            return cls(key, cites=(int(val["from"]),), agent=val["agent"])
        raise ValueError(f"unknown justification {key!r}")

    def to_json(self):
        if self.kind == "taut":
            return "taut"
        if self.kind == "axiom":
            return {"axiom": self.axiom}
        if self.kind == "mp":
            return {"mp": list(self.cites)}
        return {self.kind: {"from": self.cites[0], "agent": self.agent}}


@dataclass(frozen=True)
class ProofLine:
    n: int
    formula: Formula
    by: Justification


@dataclass(frozen=True)
class Proof:
    lines: tuple[ProofLine, ...]

    @classmethod
    def from_dict(cls, data: Mapping) -> "Proof":
        lines = []
        for raw in data["lines"]:
            lines.append(ProofLine(int(raw["n"]), parse(raw["formula"]), Justification.from_json(raw["by"])))
        return cls(tuple(lines))

    @classmethod
    def load(cls, path: str | Path) -> "Proof":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "lines": [{"n": ln.n, "formula": to_text(ln.formula), "by": ln.by.to_json()} for ln in self.lines]
        }

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula


@dataclass(frozen=True)
class ProofResult:
    accepted: bool
    line: int | None = None
    reason: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        extra = f" ({self.detail})" if self.detail else ""
        return f"rejected at line {self.line}: {self.reason}{extra}"


_RULE_BOX = {"gi": Implicit, "gsim": SimBox, "gek": EkBox}


def check_proof(pf: Proof, *, infer_axiom: bool = False) -> ProofResult:
    """Check every line in order; the first failure rejects the proof.

    Reasons: ``empty``, ``bad-numbering``, ``dynamic-operator``,
    ``unknown-axiom``, ``not-an-instance``, ``not-a-tautology``,
    ``too-many-atoms``, ``bad-citation``, ``mp-mismatch``, ``rule-mismatch``.
    """
    if not pf.lines:
        return ProofResult(False, None, "empty")
    seen: dict[int, Formula] = {}
    for ln in pf.lines:
        if ln.n in seen:
            return ProofResult(False, ln.n, "bad-numbering", "duplicate line number")
        if seen and ln.n <= max(seen):
            return ProofResult(False, ln.n, "bad-numbering", "line numbers must increase")
        f = ln.formula
        if has_dynamic(f):
            return ProofResult(False, ln.n, "dynamic-operator")
        by = ln.by
        if by.kind == "axiom":
            matches = match_axiom(f)
            if infer_axiom:
                if not matches:
                    return ProofResult(False, ln.n, "not-an-instance", "no schema matches")
            else:
                name = canonical_axiom(by.axiom or "")
                if name is None:
                    return ProofResult(False, ln.n, "unknown-axiom", str(by.axiom))
                if not any(m == name for m, _ in matches):
                    return ProofResult(False, ln.n, "not-an-instance", name)
        elif by.kind == "taut":
            try:
                ok = is_tautology_instance(f)
            except CapacityError as exc:
                return ProofResult(False, ln.n, "too-many-atoms", str(exc))
            if not ok:
                return ProofResult(False, ln.n, "not-a-tautology")
        else:
            for c in by.cites:
                if c not in seen:
                    return ProofResult(False, ln.n, "bad-citation", f"line {c} is not an earlier line")
            if by.kind == "mp":
                j, k = by.cites
                if desugar(seen[k]) != desugar(Implies(seen[j], f)):
                    return ProofResult(False, ln.n, "mp-mismatch", f"line {k} is not line {j} -> this line")
            else:
                box = _RULE_BOX[by.kind]
                if desugar(f) != desugar(box(by.agent, seen[by.cites[0]])):
                    return ProofResult(False, ln.n, "rule-mismatch", f"expected {box.__name__}[{by.agent}] of line {by.cites[0]}")
        seen[ln.n] = f
    return ProofResult(True)


def load_and_check(path: str | Path, *, infer_axiom: bool = False) -> ProofResult:
    try:
        pf = Proof.load(path)
    except ParseError as exc:
        return ProofResult(False, None, "parse-error", str(exc))
    except UnsupportedFormula as exc:
        return ProofResult(False, None, "dynamic-operator", str(exc))
    return check_proof(pf, infer_axiom=infer_axiom)


def instantiate_axiom(name: str, formulas: Mapping[str, Formula], agents: Mapping[str, str]) -> Formula:
    return substitute(_PATTERNS[canonical_axiom(name)], formulas, agents)
