"""Bounded self-checks run by ``ltlfrag selftest``.

Each suite compares a decision procedure against brute force on a sample
of random formulas and short words, and returns a list of failure strings.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .decider import InconsistencyError, analyze, decide_all
from .gcma import AnchorError, Gcma, accepts, anchor, build_gcma, trim
from .ltl import (
    Alphabet, Always, And, Eventually, Formula, Letter, Next, Not, Or, Release,
    UPWord, Until, eval_formula, to_nnf, to_text,
)

__all__ = ["random_formula", "up_words", "finite_words", "run_selftest", "SelftestReport"]

_UNARY = {"X": Next, "F": Eventually, "G": Always}
_BINARY = {"U": Until, "R": Release}


def random_formula(rng: random.Random, alphabet: Alphabet, max_temporal: int = 3,
                   ops=("X", "F", "G", "U", "R"), max_size: int = 9) -> Formula:
    """Random formula with at most ``max_temporal`` temporal operators drawn
    from ``ops`` (``G`` and ``R`` count as derived from ``F``/``U``)."""
    budget = [max_temporal]

    def gen(size):
        if size <= 1:
            return Letter(rng.choice(alphabet))
        choices = ["not", "and", "or"]
        if budget[0] > 0:
            choices += [o for o in ops if o in _UNARY] * 2 + [o for o in ops if o in _BINARY] * 2
        kind = rng.choice(choices)
        if kind == "not":
            return Not(gen(size - 1))
        if kind in _UNARY:
            budget[0] -= 1
            return _UNARY[kind](gen(size - 1))
        if kind in _BINARY:
            budget[0] -= 1
        k = rng.randint(1, size - 2) if size > 2 else 1
        left, right = gen(k), gen(max(size - 1 - k, 1))
        return {"and": And, "or": Or, "U": Until, "R": Release}[kind](left, right)

    return gen(rng.randint(1, max_size))


def finite_words(alphabet, n: int):
    for k in range(1, n + 1):
        yield from itertools.product(alphabet, repeat=k)


def up_words(alphabet, max_x: int, max_y: int):
    """Canonical ultimately periodic words with short prefix and period."""
    seen = set()
    for lx in range(max_x + 1):
        for x in itertools.product(alphabet, repeat=lx):
            for ly in range(1, max_y + 1):
                for y in itertools.product(alphabet, repeat=ly):
                    w = UPWord(x, y).canonical()
                    if w not in seen:
                        seen.add(w)
                        yield w


@dataclass
class SelftestReport:
    checked: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failures": self.failures}


def check_oracle(phi: Formula, alphabet: Alphabet, A: Gcma, words) -> list[str]:
    out = []
    for w in words:
        got, want = accepts(A, w), eval_formula(phi, w, alphabet)
        if got != want:
            out.append(f"oracle: {to_text(phi)} on {w}: automaton {got}, semantics {want}")
    return out


def check_anchors(A: Gcma, max_len: int) -> list[str]:
    out = []
    for u in finite_words(A.alphabet, max_len):
        try:
            anchor(A, u)
        except AnchorError as exc:
            out.append(f"anchor: {exc}")
            break
    return out


def run_selftest(seed: int = 0, count: int = 40, depth: int = 2,
                 alphabet="ab", inject_fault: bool = False) -> SelftestReport:
    """Oracle equivalence, anchor uniqueness and lattice consistency on
    ``count`` random formulas with at most ``depth`` temporal operators."""
    rng = random.Random(seed)
    alphabet = Alphabet(alphabet)
    words = list(up_words(alphabet, 2, 2))
    report = SelftestReport({"formulas": 0, "words": len(words)})
    for _ in range(count):
        phi = random_formula(rng, alphabet, depth)
        report.checked["formulas"] += 1
        A = trim(build_gcma(to_nnf(phi, alphabet), alphabet))
        report.failures += check_oracle(phi, alphabet, A, words)
        report.failures += check_anchors(A, 4)
        try:
            decide_all(phi, alphabet, analysis=analyze(phi, alphabet))
        except InconsistencyError as exc:
            report.failures.append(f"lattice: {exc}")
    if inject_fault:
        report.failures += check_anchors(_faulty_automaton(), 3)
    return report


def _faulty_automaton() -> Gcma:
    """The four-state example with one transition redirected so that some
    words are loops at two states."""
    from .gcma import fig1_automaton
    A = fig1_automaton()
    delta = {a: list(A.delta[i]) for i, a in enumerate(A.alphabet)}
    delta["b"][3] = 1
    delta["b"][2] = 2
    return Gcma.from_table(A.alphabet, delta, A.initial, [set(A.final_sets[0]) | {3}])
