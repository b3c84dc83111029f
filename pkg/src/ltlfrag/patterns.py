"""Forbidden patterns T1-T4 in the quotient transition graph, and word pairs
that show why a pattern rules a fragment out.

Words act on classes right to left: ``x o c`` applies the last letter of
``x`` first. Path labels are shortest first, ties broken by alphabet order.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from math import ceil

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .gcma import Gcma, accepts
from .looplang import loop_states, shortest_loop
from .ltl import UPWord
from .quotient import QuotientAutomaton

__all__ = [
    "PatternHit", "WitnessPair", "find_t1", "find_t2", "find_t3", "find_t4",
    "find_pattern", "witness", "loop_witness", "stutter_equivalent", "tail_for_class",
    "distinguishing_word", "RELATIONS", "GAME_FOR_PATTERN", "WitnessError",
]

RELATIONS = ("prefix-k-equal", "stutter-equivalent", "occ-equal-pumped", "xf-pumped", "occ-equal")
GAME_FOR_PATTERN = {"T1": "X", "T2": "SF", "T3": "F", "T4": "XF"}


@dataclass(frozen=True)
class PatternHit:
    pattern: str
    classes: dict = field(default_factory=dict)   # role name -> class id
    words: dict = field(default_factory=dict)     # role name -> tuple of letters

    def to_dict(self) -> dict:
        return {"pattern": self.pattern, "classes": dict(self.classes),
                "words": {k: "".join(v) for k, v in self.words.items()}}

    def describe(self) -> str:
        parts = [f"{k}={''.join(v) or 'ε'}" for k, v in self.words.items()]
        parts += [f"{k}=C{v}" for k, v in self.classes.items()]
        return f"{self.pattern}({', '.join(parts)})"


@dataclass(frozen=True)
class WitnessPair:
    w1: UPWord
    w2: UPWord
    relation: str
    pump: int
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"w1": str(self.w1), "w2": str(self.w2), "relation": self.relation,
                "pump": self.pump, "notes": list(self.notes)}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


# -- searches on the quotient -----------------------------------------------

def _path(Q: QuotientAutomaton, src: int, dst: int) -> tuple[str, ...] | None:
    """Shortest nonempty ``w`` with ``w o src = dst``."""
    parent: dict = {}
    queue = deque()
    for i, a in enumerate(Q.alphabet):
        c = Q.circ[i][src]
        if c not in parent:
            parent[c] = (None, a)
            queue.append(c)
    while queue:
        c = queue.popleft()
        if c == dst:
            word = []
            while c is not None:
                c, a = parent[c]
                word.append(a)
            # walking back from dst collects letters left to right
            return tuple(word)
        for i, a in enumerate(Q.alphabet):
            d = Q.circ[i][c]
            if d not in parent:
                parent[d] = (c, a)
                queue.append(d)
    return None


def _pair_graph(Q: QuotientAutomaton):
    """Distinct ordered class pairs; edge ``(p, q) -> (a o p, a o q)``."""
    n = Q.n_classes
    nodes = [(p, q) for p in range(n) for q in range(n) if p != q]
    index = {pq: i for i, pq in enumerate(nodes)}
    src, dst = [], []
    for (p, q), i in index.items():
        for row in Q.circ:
            t = (row[p], row[q])
            if t[0] != t[1]:
                src.append(i)
                dst.append(index[t])
    return nodes, index, src, dst


def _cyclic_pairs(Q: QuotientAutomaton) -> list[tuple[int, int]]:
    """Pairs lying on a cycle of the pair graph, in lexicographic order."""
    nodes, index, src, dst = _pair_graph(Q)
    if not nodes:
        return []
    m = len(nodes)
    g = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(m, m))
    _, comp = connected_components(g, directed=True, connection="strong")
    size = np.bincount(comp)
    on_cycle = [size[comp[i]] > 1 for i in range(m)]
    for s, d in zip(src, dst):
        if s == d:
            on_cycle[s] = True
    return [pq for pq, ok in zip(nodes, on_cycle) if ok]


def _pair_cycle(Q: QuotientAutomaton, p: int, q: int) -> tuple[str, ...]:
    """Shortest nonempty ``x`` with ``x o p = p`` and ``x o q = q``."""
    start = (p, q)
    parent: dict = {}
    queue = deque()

    def push(node, prev, a):
        if node[0] != node[1] and node not in parent:
            parent[node] = (prev, a)
            queue.append(node)

    for i, a in enumerate(Q.alphabet):
        push((Q.circ[i][p], Q.circ[i][q]), None, a)
    while queue:
        node = queue.popleft()
        if node == start:
            word = []
            while node is not None:
                node, a = parent[node]
                word.append(a)
            return tuple(word)
        for i, a in enumerate(Q.alphabet):
            push((Q.circ[i][node[0]], Q.circ[i][node[1]]), node, a)
    raise AssertionError("pair is not on a cycle")


def find_t1(Q: QuotientAutomaton) -> PatternHit | None:
    """Distinct classes fixed by one nonempty word."""
    pairs = _cyclic_pairs(Q)
    if not pairs:
        return None
    p, q = pairs[0]
    return PatternHit("T1", {"p": p, "q": q}, {"x": _pair_cycle(Q, p, q)})


def find_t2(Q: QuotientAutomaton) -> PatternHit | None:
    """Two distinct classes ``r, s`` of one SCC separated by a letter.

    Co-residence in an SCC gives the mutual paths ``r = x o s`` and
    ``s = y o r``; ``a o r != a o s`` gives ``p != q``.
    """
    for r in range(Q.n_classes):
        for s in range(Q.n_classes):
            if r == s or Q.scc[r] != Q.scc[s]:
                continue
            for i, a in enumerate(Q.alphabet):
                if Q.circ[i][r] != Q.circ[i][s]:
                    return PatternHit(
                        "T2",
                        {"p": Q.circ[i][r], "q": Q.circ[i][s], "r": r, "s": s},
                        {"a": (a,), "x": _path(Q, s, r), "y": _path(Q, r, s)})
    return None


def find_t3(Q: QuotientAutomaton) -> PatternHit | None:
    """A class ``r`` and letter ``a`` with ``a o a o r != a o r``."""
    for r in range(Q.n_classes):
        for i, a in enumerate(Q.alphabet):
            q = Q.circ[i][r]
            p = Q.circ[i][q]
            if p != q:
                return PatternHit("T3", {"p": p, "q": q, "r": r}, {"a": (a,)})
    return None


def find_t4(Q: QuotientAutomaton) -> PatternHit | None:
    """A synchronized cycle at a distinct pair inside one SCC."""
    for p, q in _cyclic_pairs(Q):
        if Q.scc[p] == Q.scc[q]:
            return PatternHit("T4", {"p": p, "q": q},
                              {"z": _pair_cycle(Q, p, q), "x": _path(Q, q, p), "y": _path(Q, p, q)})
    return None


_FINDERS = {"T1": find_t1, "T2": find_t2, "T3": find_t3, "T4": find_t4}


def find_pattern(Q: QuotientAutomaton, name: str) -> PatternHit | None:
    return _FINDERS[name](Q)


# -- witness words ------------------------------------------------------------

def distinguishing_word(Q: QuotientAutomaton, p: int, q: int) -> tuple[str, ...]:
    """Shortest ``u`` with exactly one of ``u o p``, ``u o q`` initial."""
    if p == q:
        raise ValueError("equal classes cannot be distinguished")
    start = (p, q)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if (node[0] in Q.initial) != (node[1] in Q.initial):
            word = []
            while parent[node] is not None:
                node, a = parent[node]
                word.append(a)
            return tuple(word)
        for i, a in enumerate(Q.alphabet):
            nxt = (Q.circ[i][node[0]], Q.circ[i][node[1]])
            if nxt not in parent:
                parent[nxt] = (node, a)
                queue.append(nxt)
    raise AssertionError("classes of a congruence are always distinguishable")


def tail_for_class(A: Gcma, Q: QuotientAutomaton, c: int) -> UPWord:
    """An omega-word whose final run starts in class ``c``: ``w y^omega``
    with ``y`` a shortest loop at the nearest state that has one."""
    has_loop = loop_states(A)
    P = Q.partition
    parent: dict = {}
    queue = deque()
    for q in A.states:
        if has_loop[q]:
            parent[q] = None
            queue.append(q)
    while queue:
        q = queue.popleft()
        if P.class_of[q] == c:
            w = []
            while parent[q] is not None:
                q, a = parent[q]
                w.append(a)
            return UPWord(tuple(w), shortest_loop(A, q))
        for i, a in enumerate(A.alphabet):
            nxt = A.delta[i][q]
            if nxt not in parent:
                parent[nxt] = (q, a)
                queue.append(nxt)
    raise AssertionError(f"class {c} holds no active state")


def _cat(*parts) -> tuple[str, ...]:
    out: list = []
    for p in parts:
        out.extend(p)
    return tuple(out)


def _prepend(prefix, w: UPWord) -> UPWord:
    return UPWord(tuple(prefix) + w.x, w.y)


def stutter_equivalent(w1: UPWord, w2: UPWord) -> bool:
    """Whether the two words agree after merging runs of equal letters."""
    return _destutter(w1) == _destutter(w2)


def _destutter(w: UPWord) -> UPWord:
    if len(set(w.y)) == 1:
        body = _merge(w.x + w.y)
        return UPWord(body[:-1], body[-1:]).canonical()
    # every further copy of y contributes merge(y), minus its first letter
    # when that letter repeats the last letter of y
    per = _merge(w.y)
    if per[0] == per[-1]:
        per = per[1:]
    return UPWord(_merge(w.x + w.y), per).canonical()


def _merge(word) -> tuple:
    out: list = []
    for a in word:
        if not out or out[-1] != a:
            out.append(a)
    return tuple(out)


def witness(A: Gcma, Q: QuotientAutomaton, hit: PatternHit, m: int = 6,
            check=True) -> WitnessPair:
    """Word pair with different membership built from ``hit``.

    ``m`` is the pump (number of game rounds the pair should survive). The
    relation of the pair is verified; pumps for T2/T4 are raised until the
    game check passes.
    """
    m = max(int(m), 1)
    P = Q.partition
    c = hit.classes
    w = hit.words
    notes: list[str] = []
    if hit.pattern == "T1":
        p, q, x = c["p"], c["q"], w["x"]
        u = distinguishing_word(Q, p, q)
        k = ceil((m + 1) / len(x))
        pre = _cat(u, x * k)
        pair = WitnessPair(_prepend(pre, tail_for_class(A, Q, p)),
                           _prepend(pre, tail_for_class(A, Q, q)), "prefix-k-equal", m)
    elif hit.pattern == "T3":
        u = distinguishing_word(Q, c["p"], c["q"])
        a = w["a"]
        v = tail_for_class(A, Q, c["r"])
        pair = WitnessPair(_prepend(_cat(u, a), v), _prepend(_cat(u, a, a), v),
                           "stutter-equivalent", m)
    elif hit.pattern == "T2":
        u = distinguishing_word(Q, c["p"], c["q"])
        a, x, y = w["a"], w["x"], w["y"]
        v = tail_for_class(A, Q, c["r"])

        def build(n):
            # (xy) o r = r and y o r = s
            return WitnessPair(_prepend(_cat(u, a, (x + y) * n), v),
                               _prepend(_cat(u, a, y, (x + y) * n), v), "occ-equal-pumped", n)
        pair = _pump(build, m, m, "SF", check, notes)
    elif hit.pattern == "T4":
        u = distinguishing_word(Q, c["p"], c["q"])
        x, y, z = w["x"], w["y"], w["z"]
        v = tail_for_class(A, Q, c["p"])

        def build(n):
            # block o p = p and (z^n y) o p = q; both words open with z^n so
            # that X moves from the common prefix see no difference
            block = _cat(z * n, x, z * n, y)
            body = _cat(block * n, z * n)
            return WitnessPair(_prepend(_cat(u, body), v), _prepend(_cat(u, z * n, y, body), v),
                               "xf-pumped", n)
        pair = _pump(build, m + 1, m, "XF", check, notes)
    else:
        raise ValueError(f"unknown pattern {hit.pattern}")
    if check:
        _verify(A, pair, m)
    if notes:
        pair = WitnessPair(pair.w1, pair.w2, pair.relation, pair.pump, tuple(notes))
    return pair


class WitnessError(AssertionError):
    """No certified word pair was found within the size limit."""


MAX_GAME_CELLS = 20_000_000


def _pump(build, n: int, rounds: int, game: str, check: bool, notes: list) -> WitnessPair:
    from .efgame import spoiler_wins
    start = n
    pair = build(n)
    if not check:
        return pair
    while spoiler_wins(pair.w1, pair.w2, game, rounds):
        n = n + 1 if n < 2 * start else 2 * n
        pair = build(n)
        if len(pair.w1) * len(pair.w2) * (rounds + 1) > MAX_GAME_CELLS:
            raise WitnessError(f"no pump up to {n} survives {rounds} rounds of the {game} game")
    if n != start:
        notes.append(f"pump raised from {start} to {n}")
    return pair


def _verify(A: Gcma, pair: WitnessPair, m: int):
    if accepts(A, pair.w1) == accepts(A, pair.w2):
        raise AssertionError(f"witness words agree on membership: {pair.w1}, {pair.w2}")
    if pair.relation == "prefix-k-equal":
        if pair.w1.prefix(m + 1) != pair.w2.prefix(m + 1):
            raise AssertionError("T1 witness words do not share a long prefix")
    elif pair.relation == "stutter-equivalent":
        if not stutter_equivalent(pair.w1, pair.w2):
            raise AssertionError("stutter witness words are not stutter equivalent")


def loop_witness(A: Gcma, Q: QuotientAutomaton, cex: dict, nonempty: bool = True) -> WitnessPair:
    """Pair ``s (w1)^omega`` / ``s (w2)^omega`` from a loop-language
    counterexample, ``s`` separating the two anchors.

    With ``nonempty`` the separating word has at least one letter, so the
    two words start alike (needed when the anchors differ only on the
    empty word's side of the congruence)."""
    P = Q.partition
    p0, q0 = cex["anchors"]
    cp, cq = P.class_of[p0], P.class_of[q0]
    s = _nonempty_distinguishing(Q, cp, cq) if nonempty else distinguishing_word(Q, cp, cq)
    relation = "stutter-equivalent" if cex["kind"] == "stutter" else "occ-equal"
    pair = WitnessPair(UPWord(s, cex["w1"]), UPWord(s, cex["w2"]), relation, 0)
    _verify(A, pair, 0)
    return pair


def _nonempty_distinguishing(Q: QuotientAutomaton, p: int, q: int) -> tuple[str, ...]:
    best = None
    for i, a in enumerate(Q.alphabet):
        pa, qa = Q.circ[i][p], Q.circ[i][q]
        if pa == qa:
            continue
        u = distinguishing_word(Q, pa, qa) + (a,)
        if best is None or len(u) < len(best):
            best = u
    if best is None:
        raise ValueError("classes agree on every nonempty word")
    return best
