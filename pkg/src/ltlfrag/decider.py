"""Per-fragment verdicts: forbidden patterns on the left quotient plus
conditions on the loop languages.

==========  =====================  ===============================
fragment    quotient               loop languages
==========  =====================  ===============================
X           no T1                  (none)
SF          no T2                  1-locally testable
F           no T2, no T3           1-locally testable
X, F        no T4                  locally testable
U           no T3                  stutter closed
==========  =====================  ===============================

For SF and F the loop-language anchors are compared modulo the coarsening
of the congruence that ignores the empty word (see
:func:`ltlfrag.quotient.nonempty_congruence`); otherwise formulas that only
inspect the first letter, like ``a``, would be rejected.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .gcma import DEFAULT_MAX_SUB, Gcma, build_gcma, trim
from .looplang import (
    DEFAULT_MAX_SEMIGROUP, check_stutter_closure, check_swap_closure,
    is_locally_testable, loop_language, minimize,
)
from .ltl import Alphabet, Formula, Fragment, LtlError, normalize_operator_set, parse, to_nnf, to_text
from .patterns import WitnessError, WitnessPair, find_pattern, loop_witness, witness
from .quotient import Partition, QuotientAutomaton, left_congruence, nonempty_congruence, quotient

__all__ = ["Verdict", "Analysis", "analyze", "decide", "decide_all", "InconsistencyError",
           "ROWS", "LATTICE", "DEFAULT_GAME_DEPTH"]

DEFAULT_GAME_DEPTH = 6

# (patterns, loop-language condition) per fragment
ROWS = {
    Fragment.X: (("T1",), None),
    Fragment.SF: (("T2",), "one_lt"),
    Fragment.F: (("T2", "T3"), "one_lt"),
    Fragment.XF: (("T4",), "lt"),
    Fragment.U: (("T3",), "stutter"),
}

# a yes for the left fragment forces a yes for the right one
LATTICE = [(Fragment.F, Fragment.SF), (Fragment.F, Fragment.U), (Fragment.F, Fragment.XF),
           (Fragment.SF, Fragment.XF), (Fragment.X, Fragment.XF)]


class InconsistencyError(AssertionError):
    """Verdicts contradict the inclusions between fragments."""


@dataclass
class Verdict:
    formula: str
    alphabet: tuple
    fragment: Fragment
    expressible: bool
    reasons: list = field(default_factory=list)    # [{"kind", "detail"}]
    witness: WitnessPair | None = None
    notes: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "formula": self.formula,
            "alphabet": list(self.alphabet),
            "fragment": str(self.fragment),
            "expressible": self.expressible,
            "reasons": self.reasons,
            "witness": self.witness.to_dict() if self.witness else None,
            "notes": list(self.notes),
            "stats": dict(self.stats),
        }
        if timings:
            out["stats"]["timings_ms"] = dict(self.timings)
        return out

    def to_json(self, timings: bool = False, **kw) -> str:
        return json.dumps(self.to_dict(timings), **kw)


@dataclass
class Analysis:
    """Everything the rows share: the trimmed automaton, its congruences and
    the quotient."""
    formula: Formula
    alphabet: Alphabet
    gcma: Gcma
    partition: Partition
    quotient: QuotientAutomaton
    nonempty: Partition
    raw_states: int
    timings: dict

    @property
    def stats(self) -> dict:
        return {"tableau_states": self.raw_states, "trim_states": self.gcma.n_states,
                "classes": self.quotient.n_classes,
                "sccs": len(self.quotient.scc_has_edge),
                "final_sets": len(self.gcma.final_sets)}


def analyze(phi, alphabet, max_sub: int = DEFAULT_MAX_SUB) -> Analysis:
    alphabet = Alphabet(alphabet)
    if isinstance(phi, str):
        phi = parse(phi, alphabet)
    if not isinstance(phi, Formula):
        raise LtlError(f"expected a formula, got {type(phi).__name__}")
    timings = {}
    t0 = time.perf_counter()
    raw = build_gcma(to_nnf(phi, alphabet), alphabet, max_sub)
    t1 = time.perf_counter()
    A = trim(raw)
    t2 = time.perf_counter()
    P = left_congruence(A)
    Q = quotient(A, P)
    t3 = time.perf_counter()
    timings.update(build=_ms(t1 - t0), trim=_ms(t2 - t1), quotient=_ms(t3 - t2))
    return Analysis(phi, alphabet, A, P, Q, nonempty_congruence(A, P), raw.n_states, timings)


def _ms(seconds: float) -> float:
    return round(1000 * seconds, 3)


def decide(phi, fragment, alphabet=None, *, max_sub: int = DEFAULT_MAX_SUB,
           max_semigroup: int = DEFAULT_MAX_SEMIGROUP, game_depth: int = DEFAULT_GAME_DEPTH,
           all_reasons: bool = False, analysis: Analysis | None = None) -> Verdict:
    """Whether the language of ``phi`` is expressible in ``fragment``.

    ``fragment`` is anything :func:`normalize_operator_set` accepts.
    """
    frag = normalize_operator_set(fragment)
    if analysis is None:
        if alphabet is None:
            raise LtlError("an alphabet is required")
        analysis = analyze(phi, alphabet, max_sub)
    an = analysis
    text = to_text(an.formula)
    verdict = Verdict(text, tuple(an.alphabet), frag, True, stats=an.stats,
                      timings=dict(an.timings))
    if frag is Fragment.FULL:
        verdict.notes.append("every formula is in the full logic")
        return verdict
    if not an.gcma.initial:
        verdict.notes.append("empty language")
    if frag is Fragment.U:
        verdict.notes.append("TL-definability of the language holds automatically for formula input")

    patterns, loop_condition = ROWS[frag]
    t0 = time.perf_counter()
    for name in patterns:
        hit = find_pattern(an.quotient, name)
        if hit is None:
            continue
        verdict.reasons.append({"kind": "pattern", "detail": hit.to_dict()})
        if verdict.witness is None:
            try:
                verdict.witness = witness(an.gcma, an.quotient, hit, game_depth)
            except WitnessError as exc:
                verdict.notes.append(f"witness: {exc}")
            else:
                for note in verdict.witness.notes:
                    verdict.notes.append(f"witness: {note}")
        if not all_reasons:
            break
    t1 = time.perf_counter()
    if loop_condition is not None and (all_reasons or not verdict.reasons):
        verdict.reasons.extend(_loop_reasons(an, loop_condition, max_semigroup, all_reasons))
    t2 = time.perf_counter()
    verdict.timings.update(patterns=_ms(t1 - t0), loop_languages=_ms(t2 - t1))
    verdict.expressible = not verdict.reasons
    return verdict


def _loop_reasons(an: Analysis, condition: str, max_semigroup: int, all_reasons: bool) -> list:
    out = []
    if condition == "lt":
        for c in range(an.partition.n_classes):
            ll = loop_language(an.gcma, an.partition, c)
            if not is_locally_testable(an.gcma, an.partition, c, max_semigroup):
                out.append({"kind": "loop-language", "detail": {
                    "property": "locally-testable", "class": c,
                    "dfa_size": minimize(ll.dfa).n_states,
                    "witness": None}})
                if not all_reasons:
                    break
        return out
    P = an.nonempty if condition == "one_lt" else an.partition
    checks = [check_stutter_closure] if condition == "stutter" else [check_stutter_closure,
                                                                     check_swap_closure]
    for check in checks:
        cex = check(an.gcma, P)
        if cex is None:
            continue
        pair = loop_witness(an.gcma, an.quotient, cex, nonempty=condition == "one_lt")
        detail = {"property": f"{cex['kind']}-closed",
                  "counterexample": {k: ("".join(v) if isinstance(v, tuple) else v)
                                     for k, v in cex.items()},
                  "witness": pair.to_dict()}
        out.append({"kind": "loop-language", "detail": detail})
        if not all_reasons:
            break
    return out


def decide_all(phi, alphabet=None, *, check_lattice: bool = True, analysis=None, **opts) -> dict:
    """Verdicts for X, SF, F, X+F and U, sharing one automaton."""
    if analysis is None:
        analysis = analyze(phi, alphabet, opts.get("max_sub", DEFAULT_MAX_SUB))
    opts.pop("max_sub", None)
    out = {f: decide(None, f, analysis=analysis, **opts) for f in ROWS}
    if check_lattice:
        for small, big in LATTICE:
            if out[small].expressible and not out[big].expressible:
                raise InconsistencyError(
                    f"{to_text(analysis.formula)}: {small} says yes but {big} says no")
    return out
