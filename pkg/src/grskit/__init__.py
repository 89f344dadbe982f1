"""Exact computations with generalized root systems."""

from grskit.linalg import Rat, SymForm
from grskit.rootset import (GRS, Chamber, EquivalenceMap, RootSet, check_grs_axioms,
                            enumerate_chambers, equivalence, find_base, is_crystallographic,
                            multiplier, parabolic_closure, primitive_roots)

__version__ = "0.1.0"

__all__ = [
    "Rat", "SymForm", "GRS", "Chamber", "EquivalenceMap", "RootSet", "check_grs_axioms",
    "enumerate_chambers", "equivalence", "find_base", "is_crystallographic", "multiplier",
    "parabolic_closure", "primitive_roots",
]
