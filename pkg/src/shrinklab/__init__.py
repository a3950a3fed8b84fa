"""Indexed grammars: normal form, bounded derivation search and word shrinking."""

__version__ = "0.1.0"

from .harness import growth_check, refute_decomposition
from .derivation import DerivationTree, SearchBounds, Verdict, enumerate_words, is_member
from .grammar import NT, Grammar, GrammarError, Production, load_grammar, parse_grammar, parse_word
from .normalize import is_normal_form, to_normal_form
from .shrink import (approximate_z, beta_view, factorize, gamma_view, select_vertex, shrink,
                     shrink_chain, verify_theorem_a)
from .subword import distinguished_cover, divides, minimal_elements

__all__ = [
    "NT", "Grammar", "GrammarError", "Production", "load_grammar", "parse_grammar", "parse_word",
    "is_normal_form", "to_normal_form", "DerivationTree", "SearchBounds", "Verdict",
    "enumerate_words", "is_member", "divides", "minimal_elements", "distinguished_cover",
    "approximate_z", "beta_view", "gamma_view", "select_vertex", "factorize", "shrink",
    "shrink_chain", "verify_theorem_a", "growth_check", "refute_decomposition",
]
