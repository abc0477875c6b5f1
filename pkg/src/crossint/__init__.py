"""Search and verification tools for non-empty cross-intersecting families."""
from .bounds import BoundReport, TheoremParams
from .combinatorics import KSet, binomial, lex_compare, lex_rank, lex_unrank
from .errors import BudgetExceeded, GroundMismatch, ParameterError
from .families import Family, MaximalPair

__version__ = "0.1.0"

__all__ = ["BoundReport", "BudgetExceeded", "Family", "GroundMismatch", "KSet",
           "MaximalPair", "ParameterError", "TheoremParams", "binomial",
           "lex_compare", "lex_rank", "lex_unrank"]
