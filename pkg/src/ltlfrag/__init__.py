"""Decide whether an LTL formula over a finite alphabet is expressible in
one of the fragments X, SF, F, XF and U.

>>> from ltlfrag import decide
>>> decide("a R b", "F", "ab").expressible
True
"""
from .decider import Verdict, analyze, decide, decide_all
from .ltl import Alphabet, Fragment, LtlError, UPWord, eval_formula, parse, to_nnf, to_text

__all__ = [
    "Alphabet", "Fragment", "LtlError", "UPWord", "Verdict", "analyze", "decide", "decide_all",
    "eval_formula", "parse", "to_nnf", "to_text",
]
__version__ = "0.1.0"
