"""Left congruence of a GCMA and its quotient semi-automaton."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .gcma import Gcma
from .ltl import Alphabet

__all__ = ["Partition", "QuotientAutomaton", "left_congruence", "nonempty_congruence",
           "quotient", "sccs"]


@dataclass(frozen=True)
class Partition:
    class_of: tuple[int, ...]
    n_classes: int

    def members(self, c: int) -> list[int]:
        return [q for q, k in enumerate(self.class_of) if k == c]

    def to_dict(self) -> dict:
        return {"class_of": list(self.class_of), "n_classes": self.n_classes,
                "classes": [self.members(c) for c in range(self.n_classes)]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def left_congruence(A: Gcma) -> Partition:
    """Coarsest partition that respects membership in the initial set and
    is compatible with every ``a.``; two states end up together exactly
    when the same finite words lead from them into the initial set.

    Moore refinement; class ids are numbered by first member.
    """
    n = A.n_states
    block = [int(q in A.initial) for q in range(n)]
    while True:
        sig = [(block[q], *(block[row[q]] for row in A.delta)) for q in range(n)]
        ids: dict = {}
        new = [ids.setdefault(s, len(ids)) for s in sig]
        if len(ids) == len(set(block)):
            break
        block = new
    ids = {}
    canon = tuple(ids.setdefault(b, len(ids)) for b in block)
    return Partition(canon, len(ids))


@dataclass(frozen=True)
class QuotientAutomaton:
    """Reverse semi-DFA on congruence classes.

    ``circ[a][c]`` is the class of ``a.q`` for any ``q`` in class ``c``. The
    transition graph has an edge ``circ[a][c] -> c`` labelled ``a``.
    """
    alphabet: Alphabet
    n_classes: int
    initial: frozenset[int]
    circ: tuple[tuple[int, ...], ...]
    scc: tuple[int, ...]
    scc_has_edge: tuple[bool, ...]
    partition: Partition

    def apply(self, word, c: int) -> int:
        for a in reversed(word):
            c = self.circ[self.alphabet.index(a)][c]
        return c

    def scc_members(self, k: int) -> list[int]:
        return [c for c in range(self.n_classes) if self.scc[c] == k]

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "classes": [self.partition.members(c) for c in range(self.n_classes)],
            "initial": sorted(self.initial),
            "circ": {a: list(self.circ[i]) for i, a in enumerate(self.alphabet)},
            "scc": list(self.scc),
            "scc_has_edge": list(self.scc_has_edge),
        }

    def to_dot(self, name: str = "quotient") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for k in range(len(self.scc_has_edge)):
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f'    label="SCC {k}";')
            for c in self.scc_members(k):
                shape = "doublecircle" if c in self.initial else "circle"
                lines.append(f'    c{c} [label="C{c}", shape={shape}];')
            lines.append("  }")
        edges: dict = {}
        for i, a in enumerate(self.alphabet):
            for c in range(self.n_classes):
                edges.setdefault((self.circ[i][c], c), []).append(a)
        for (p, q), letters in sorted(edges.items()):
            lines.append(f'  c{p} -> c{q} [label="{",".join(letters)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def quotient(A: Gcma, P: Partition) -> QuotientAutomaton:
    rep = [P.class_of.index(c) for c in range(P.n_classes)]
    circ = tuple(tuple(P.class_of[row[q]] for q in rep) for row in A.delta)
    initial = frozenset(P.class_of[q] for q in A.initial)
    scc, has_edge = sccs_of(circ, P.n_classes)
    return QuotientAutomaton(A.alphabet, P.n_classes, initial, circ, scc, has_edge, P)


def sccs_of(circ, n: int) -> tuple[tuple[int, ...], tuple[bool, ...]]:
    """SCC ids of the graph with edges ``circ[a][c] -> c``, numbered by
    first member, and whether each SCC has an edge (a self-loop counts)."""
    if n == 0:
        return (), ()
    src = [row[c] for row in circ for c in range(n)]
    dst = [c for _ in circ for c in range(n)]
    graph = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, comp = connected_components(graph, directed=True, connection="strong")
    ids: dict = {}
    scc = tuple(ids.setdefault(int(k), len(ids)) for k in comp)
    size = [0] * len(ids)
    for k in scc:
        size[k] += 1
    has_edge = [s > 1 for s in size]
    for p, q in zip(src, dst):
        if p == q:
            has_edge[scc[p]] = True
    return scc, tuple(has_edge)


def sccs(Q: QuotientAutomaton) -> list[tuple[list[int], bool]]:
    """Components as ``(classes, has_edge)`` pairs."""
    return [(Q.scc_members(k), Q.scc_has_edge[k]) for k in range(len(Q.scc_has_edge))]


def nonempty_congruence(A: Gcma, P: Partition) -> Partition:
    """Coarsening of ``P`` that ignores the empty word: ``p`` and ``q`` are
    identified when ``a.p`` and ``a.q`` are congruent for every letter, that
    is, when the same nonempty words lead from them into the initial set."""
    ids: dict = {}
    class_of = tuple(ids.setdefault(tuple(P.class_of[row[q]] for row in A.delta), len(ids))
                     for q in range(A.n_states))
    return Partition(class_of, len(ids))
