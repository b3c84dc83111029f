"""Loop languages and their testability properties.

All automata here read loop words reversed, which is the natural direction
for the reverse transition function. Stutter closure, swap closure, 1-local
testability and local testability are invariant under reversal, so nothing
needs to be un-reversed except counterexamples.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .gcma import Gcma, SizeGuardError
from .quotient import Partition

__all__ = [
    "Dfa", "LoopDfa", "LoopLanguage", "TestabilityReport", "ClassTestability",
    "loop_dfa", "loop_language", "loop_states", "shortest_loop",
    "check_stutter_closure", "check_swap_closure", "is_one_locally_testable",
    "is_locally_testable", "dfa_is_locally_testable", "minimize",
    "transition_semigroup", "testability_report", "DEFAULT_MAX_SEMIGROUP",
]

DEFAULT_MAX_SEMIGROUP = 20000


@dataclass(frozen=True)
class Dfa:
    """Complete DFA over letter ids ``0 .. n_letters-1``."""
    n_letters: int
    trans: tuple[tuple[int, ...], ...]  # trans[state][letter]
    start: int
    accepting: frozenset[int]

    @property
    def n_states(self) -> int:
        return len(self.trans)

    def run(self, word_ids) -> int:
        s = self.start
        for c in word_ids:
            s = self.trans[s][c]
        return s

    def accepts(self, word_ids) -> bool:
        return self.run(word_ids) in self.accepting

    @classmethod
    def explore(cls, start, n_letters: int, step, accepting) -> "Dfa":
        """Reachable part of an implicit automaton given by ``step(state, c)``."""
        index = {start: 0}
        order = [start]
        trans = []
        i = 0
        while i < len(order):
            s = order[i]
            row = []
            for c in range(n_letters):
                t = step(s, c)
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
                row.append(index[t])
            trans.append(tuple(row))
            i += 1
        acc = frozenset(index[s] for s in order if accepting(s))
        return cls(n_letters, tuple(trans), 0, acc)


_START = ("start",)


@dataclass(frozen=True)
class LoopDfa:
    """Accepts ``reverse(u)`` iff ``u`` is a loop at ``q``.

    States are ``(p, T)`` with ``T`` the set of final sets met so far, plus
    a fresh start state so that the empty word is rejected.
    """
    gcma: Gcma
    q: int
    dfa: Dfa

    def accepts_loop(self, word) -> bool:
        ids = self.gcma.letter_ids(word)
        return self.dfa.accepts(reversed(ids))


def _loop_step(A: Gcma, fm, q):
    def step(s, c):
        p, t = (q, fm[q]) if s == _START else s
        p = A.delta[c][p]
        return (p, t | fm[p])
    return step


def loop_dfa(A: Gcma, q: int) -> LoopDfa:
    fm = A.final_masks()
    full = A.full_mask
    dfa = Dfa.explore(_START, len(A.alphabet), _loop_step(A, fm, q),
                      lambda s: s != _START and s[0] == q and s[1] == full)
    return LoopDfa(A, q, dfa)


@dataclass(frozen=True)
class LoopLanguage:
    """Union of the loop languages of the members of one class, as a DFA on
    reversed words."""
    cls: int
    members: tuple[int, ...]
    dfa: Dfa

    def accepts_loop(self, gcma: Gcma, word) -> bool:
        return self.dfa.accepts(reversed(gcma.letter_ids(word)))


def loop_language(A: Gcma, P: Partition, c: int) -> LoopLanguage:
    """Synchronized product of the members' loop automata; accepts when some
    component does (each component is deterministic, so this equals the
    subset construction of their disjoint union)."""
    members = tuple(P.members(c))
    fm = A.final_masks()
    full = A.full_mask
    steps = [_loop_step(A, fm, q) for q in members]

    def step(s, ch):
        return tuple(st(x, ch) for st, x in zip(steps, s))

    def accepting(s):
        return any(x != _START and x[0] == q and x[1] == full for x, q in zip(s, members))

    dfa = Dfa.explore(tuple(_START for _ in members), len(A.alphabet), step, accepting)
    return LoopLanguage(c, members, dfa)


def loop_states(A: Gcma) -> list[bool]:
    """Per state, whether it has a loop: its SCC has an edge and meets every
    final set."""
    n = A.n_states
    if n == 0:
        return []
    src = [row[q] for row in A.delta for q in range(n)]
    dst = [q for _ in A.delta for q in range(n)]
    g = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, comp = connected_components(g, directed=True, connection="strong")
    size = np.bincount(comp, minlength=comp.max() + 1)
    edge = [bool(s > 1) for s in size]
    for p, q in zip(src, dst):
        if p == q:
            edge[comp[p]] = True
    fm = A.final_masks()
    meets = [0] * len(edge)
    for q in range(n):
        meets[comp[q]] |= fm[q]
    return [edge[comp[q]] and meets[comp[q]] == A.full_mask for q in range(n)]


def shortest_loop(A: Gcma, q: int) -> tuple[str, ...] | None:
    """A shortest loop at ``q`` (BFS on the loop automaton, alphabet order)."""
    fm = A.final_masks()
    full = A.full_mask
    step = _loop_step(A, fm, q)
    parent = {_START: None}
    queue = deque([_START])
    while queue:
        s = queue.popleft()
        if s != _START and s[0] == q and s[1] == full:
            rev = []
            while parent[s] is not None:
                s, c = parent[s]
                rev.append(c)
            # rev lists letters last-read first; the loop word is the reading reversed
            return tuple(A.alphabet[c] for c in rev)
        for c in range(len(A.alphabet)):
            t = step(s, c)
            if t not in parent:
                parent[t] = (s, c)
                queue.append(t)
    return None


# -- stutter and swap closure -------------------------------------------------

def _closure_search(A: Gcma, P: Partition, mode: int, classes=None):
    """Shortest counterexample over ordered pairs of states in different
    classes, or ``None``."""
    if A.n_states == 0:
        return None
    has_loop = loop_states(A)
    cand = [q for q in A.states if has_loop[q]]
    delta = A.delta_array()
    fm = np.asarray(A.final_masks(), dtype=np.int64)
    best = None
    for p0 in cand:
        for q0 in cand:
            cp, cq = P.class_of[p0], P.class_of[q0]
            if cp == cq:
                continue
            if classes is not None and cp not in classes and cq not in classes:
                continue
            hit = _kernels.loop_product_search(delta, fm, A.full_mask, p0, q0, mode)
            if hit is None:
                continue
            v_rev, a, b, u_rev = hit
            size = len(v_rev) + len(u_rev)
            if best is None or size < best[0]:
                best = (size, v_rev, a, b, u_rev, p0, q0)
    if best is None:
        return None
    _, v_rev, a, b, u_rev, p0, q0 = best
    sigma = A.alphabet
    u = tuple(sigma[c] for c in reversed(u_rev))
    v = tuple(sigma[c] for c in reversed(v_rev))
    if mode == _kernels.MODE_STUTTER:
        return {"kind": "stutter", "u": u, "a": sigma[a], "v": v,
                "w1": u + (sigma[a],) + v, "w2": u + (sigma[a], sigma[a]) + v,
                "anchors": [p0, q0]}
    return {"kind": "swap", "u": u, "a": sigma[a], "b": sigma[b], "v": v,
            "w1": u + (sigma[a], sigma[b]) + v, "w2": u + (sigma[b], sigma[a]) + v,
            "anchors": [p0, q0]}


def check_stutter_closure(A: Gcma, P: Partition, classes=None):
    """Counterexample ``u, a, v`` with ``uav`` and ``uaav`` anchored in
    different classes, or ``None``."""
    return _closure_search(A, P, _kernels.MODE_STUTTER, classes)


def check_swap_closure(A: Gcma, P: Partition, classes=None):
    """Counterexample ``u, a, b, v`` with ``uabv`` and ``ubav`` anchored in
    different classes, or ``None``."""
    return _closure_search(A, P, _kernels.MODE_SWAP, classes)


def is_one_locally_testable(A: Gcma, P: Partition):
    """``(verdict, counterexample)``; a loop language family is 1-locally
    testable iff it is closed under stuttering and under swapping adjacent
    letters."""
    cex = check_stutter_closure(A, P)
    if cex is None:
        cex = check_swap_closure(A, P)
    return cex is None, cex


# -- minimization and the transition semigroup -------------------------------

def minimize(dfa: Dfa) -> Dfa:
    """Moore refinement on the reachable part of the automaton."""
    dfa = Dfa.explore(dfa.start, dfa.n_letters, lambda s, c: dfa.trans[s][c],
                      lambda s: s in dfa.accepting)
    n = dfa.n_states
    block = [int(s in dfa.accepting) for s in range(n)]
    while True:
        ids: dict = {}
        new = [ids.setdefault((block[s], *(block[t] for t in dfa.trans[s])), len(ids))
               for s in range(n)]
        if len(ids) == len(set(block)):
            break
        block = new
    ids = {}
    canon = [ids.setdefault(b, len(ids)) for b in [block[dfa.start]] + block]
    canon = canon[1:]
    k = len(ids)
    trans = [None] * k
    for s in range(n):
        if trans[canon[s]] is None:
            trans[canon[s]] = tuple(canon[t] for t in dfa.trans[s])
    acc = frozenset(canon[s] for s in dfa.accepting)
    return Dfa(dfa.n_letters, tuple(trans), canon[dfa.start], acc)


def transition_semigroup(dfa: Dfa, max_size: int = DEFAULT_MAX_SEMIGROUP):
    """Transformations induced by nonempty words, closed under product.

    Elements are tuples ``t`` with ``t[s]`` the state reached from ``s``;
    ``(t1 * t2)[s] = t2[t1[s]]`` (read ``t1`` first).
    Returns ``(elements, index)``.
    """
    gens = [tuple(dfa.trans[s][c] for s in range(dfa.n_states)) for c in range(dfa.n_letters)]
    index: dict = {}
    elems: list = []
    for g in gens:
        if g not in index:
            index[g] = len(elems)
            elems.append(g)
    i = 0
    while i < len(elems):
        t = elems[i]
        for g in gens:
            prod = tuple(g[x] for x in t)
            if prod not in index:
                if len(elems) >= max_size:
                    raise SizeGuardError(
                        f"transition semigroup exceeds {max_size} elements")
                index[prod] = len(elems)
                elems.append(prod)
        i += 1
    return elems, index


def _mul(t1, t2):
    return tuple(t2[x] for x in t1)


def dfa_is_locally_testable(dfa: Dfa, max_semigroup: int = DEFAULT_MAX_SEMIGROUP) -> bool:
    """Local testability of the accepted language restricted to nonempty
    words: for every idempotent ``e`` the monoid ``eSe`` is idempotent and
    commutative."""
    elems, _ = transition_semigroup(minimize(dfa), max_semigroup)
    for e in elems:
        if _mul(e, e) != e:
            continue
        local = {_mul(_mul(e, s), e) for s in elems}
        for x in local:
            if _mul(x, x) != x:
                return False
        local = list(local)
        for i, x in enumerate(local):
            for y in local[i + 1:]:
                if _mul(x, y) != _mul(y, x):
                    return False
    return True


def is_locally_testable(A: Gcma, P: Partition, c: int,
                        max_semigroup: int = DEFAULT_MAX_SEMIGROUP) -> bool:
    return dfa_is_locally_testable(loop_language(A, P, c).dfa, max_semigroup)


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class ClassTestability:
    cls: int
    loop_language_dfa_size: int
    one_lt: bool
    lt: bool
    stutter: bool
    counterexample: dict | None

    def to_dict(self) -> dict:
        cex = None
        if self.counterexample is not None:
            cex = {k: ("".join(v) if isinstance(v, tuple) else v)
                   for k, v in self.counterexample.items()}
        return {"class": self.cls, "loop_language_dfa_size": self.loop_language_dfa_size,
                "one_lt": self.one_lt, "lt": self.lt, "stutter": self.stutter,
                "counterexample": cex}


@dataclass(frozen=True)
class TestabilityReport:
    classes: tuple[ClassTestability, ...] = field(default_factory=tuple)

    @property
    def one_lt(self) -> bool:
        return all(c.one_lt for c in self.classes)

    @property
    def lt(self) -> bool:
        return all(c.lt for c in self.classes)

    @property
    def stutter(self) -> bool:
        return all(c.stutter for c in self.classes)

    def to_dict(self) -> dict:
        return {"one_lt": self.one_lt, "lt": self.lt, "stutter": self.stutter,
                "classes": [c.to_dict() for c in self.classes]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def testability_report(A: Gcma, P: Partition,
                       max_semigroup: int = DEFAULT_MAX_SEMIGROUP) -> TestabilityReport:
    """Per-class verdicts. A class counts as stutter (resp. 1-lt) failing
    when one of the two words of a counterexample is anchored in it."""
    if A.n_states == 0:
        return TestabilityReport(())
    out = []
    for c in range(P.n_classes):
        ll = loop_language(A, P, c)
        st = check_stutter_closure(A, P, {c})
        sw = None if st is not None else check_swap_closure(A, P, {c})
        out.append(ClassTestability(
            c, minimize(ll.dfa).n_states, st is None and sw is None,
            dfa_is_locally_testable(ll.dfa, max_semigroup), st is None,
            st if st is not None else sw))
    return TestabilityReport(tuple(out))

