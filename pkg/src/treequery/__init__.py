"""treequery: mining frequent tree queries and tree-query associations
in a single directed data graph."""

from .graph import DataGraph, load_graph
from .patterns import TreePattern, TreeQuery, canonize, purify, refined_level_sequence
from .store import FrequencyTable, PatternStore
from .trees import CanonicalTree, enumerate_trees

__all__ = [
    "DataGraph",
    "load_graph",
    "TreePattern",
    "TreeQuery",
    "canonize",
    "purify",
    "refined_level_sequence",
    "FrequencyTable",
    "PatternStore",
    "CanonicalTree",
    "enumerate_trees",
]

__version__ = "0.1.0"
