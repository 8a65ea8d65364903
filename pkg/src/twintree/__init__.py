"""Exact computations in the twisted twin of the Grigorchuk group."""

from .tree_core import (
    GRIGORCHUK,
    TWIN,
    AutomatonSpec,
    NotContracting,
    Portrait,
    ResourceCapExceeded,
    SelfSimilarGroup,
    comm,
    conj,
    get_group,
    inverse,
    reduce,
)
from .expr import ParseError, parse

__version__ = "0.1.0"

__all__ = [
    "GRIGORCHUK",
    "TWIN",
    "AutomatonSpec",
    "NotContracting",
    "ParseError",
    "Portrait",
    "ResourceCapExceeded",
    "SelfSimilarGroup",
    "comm",
    "conj",
    "get_group",
    "inverse",
    "parse",
    "reduce",
]
