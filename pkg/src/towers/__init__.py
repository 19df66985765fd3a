"""Towers of words between regular languages.

The package decides whether two regular languages admit an infinite tower
of subsequences or prefixes, computes maximal heights when they do not, and
generates the automata families that realise large finite towers.
"""

from .automata import (
    Automaton,
    AutomatonError,
    accepts,
    canonical,
    determinize,
    downward_closure,
    equivalent,
    minimize,
    parse_automaton,
    prefix_closure,
    product,
    serialize_automaton,
    to_dot,
    trim,
)
from .prefix import (
    brute_prefix_height,
    find_pattern,
    prefix_bound_dfa,
    prefix_bound_nfa,
    prefix_height,
    prefix_height_dfa,
    prefix_height_fixpoint,
)
from .results import FINITE, INFINITE, UNDECIDED, HeightResult
from .subseq import (
    brute_subseq_height,
    cyclic_factorization,
    potential,
    potential_sequence,
    subseq_bound,
    subseq_height,
)
from .verify import PREFIX, SUBSEQUENCE, Tower, TowerReport, verify_tower
from .words import is_prefix, is_subsequence, leftmost_embedding

__all__ = [
    "Automaton",
    "AutomatonError",
    "FINITE",
    "HeightResult",
    "INFINITE",
    "PREFIX",
    "SUBSEQUENCE",
    "Tower",
    "TowerReport",
    "UNDECIDED",
    "accepts",
    "brute_prefix_height",
    "brute_subseq_height",
    "canonical",
    "cyclic_factorization",
    "determinize",
    "downward_closure",
    "equivalent",
    "find_pattern",
    "is_prefix",
    "is_subsequence",
    "leftmost_embedding",
    "minimize",
    "parse_automaton",
    "potential",
    "potential_sequence",
    "prefix_bound_dfa",
    "prefix_bound_nfa",
    "prefix_closure",
    "prefix_height",
    "prefix_height_dfa",
    "prefix_height_fixpoint",
    "product",
    "serialize_automaton",
    "subseq_bound",
    "subseq_height",
    "to_dot",
    "trim",
    "verify_tower",
]

__version__ = "0.1.0"
