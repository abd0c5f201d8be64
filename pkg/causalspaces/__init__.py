"""
causalspaces - causal orders, spaces of input histories and the exhaustive
classification of causally complete spaces
"""
from .core.completions import causal_completions
from .core.errors import CausalError
from .core.pfun import InputFamily, PartialFunction
from .core.preorder import CausalRelation, EventSet, Preorder
from .core.space import (
    HistorySpace,
    free_choice,
    induce,
    is_causally_complete,
    is_tight,
    space_join,
    space_leq,
    space_meet,
    tips,
)
from .core.symmetry import SymmetryGroup, canonicalize, orbit

__version__ = "1.0.0"

__all__ = [
    "CausalError",
    "CausalRelation",
    "EventSet",
    "HistorySpace",
    "InputFamily",
    "PartialFunction",
    "Preorder",
    "SymmetryGroup",
    "canonicalize",
    "causal_completions",
    "free_choice",
    "induce",
    "is_causally_complete",
    "is_tight",
    "orbit",
    "space_join",
    "space_leq",
    "space_meet",
    "tips",
]
