"""Awareness-based indistinguishability logic: formulas, finite models with
awareness, model checking and bounded validity search, the bridge to the
Fagin-Halpern logic, and a Hilbert-style proof checker."""

from .checker import PointedModel, SearchBounds, find_countermodel, model_valid, satisfies
from .model import EpistemicModel
from .syntax import parse, to_text

__all__ = [
    "EpistemicModel",
    "PointedModel",
    "SearchBounds",
    "find_countermodel",
    "model_valid",
    "parse",
    "satisfies",
    "to_text",
]
