"""Reverse-deterministic generalized Buchi automata with unique final runs.

A state is entered backwards: ``delta[a][q]`` is the state ``a.q`` that a run
occupies one position before ``q`` when the letter there is ``a``. For a
finite word ``u`` we write ``u.q`` for the state reached by applying the
letters of ``u`` right to left.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .ltl import (
    Alphabet, Always, And, Const, Eventually, Formula, Letter, LtlError, Next,
    Or, Release, UPWord, Until, is_nnf, subformulas, to_text,
)

__all__ = [
    "Gcma", "AutomatonError", "SizeGuardError", "AnchorError",
    "build_gcma", "trim", "anchor", "accepts", "final_run_prefix",
    "fig1_automaton", "DEFAULT_MAX_SUB",
]

DEFAULT_MAX_SUB = 16


class AutomatonError(LtlError):
    pass


class SizeGuardError(AutomatonError):
    pass


class AnchorError(AutomatonError):
    """A word has no anchor or several: the automaton is not a GCMA."""


@dataclass(frozen=True, eq=False)
class Gcma:
    alphabet: Alphabet
    labels: tuple
    delta: tuple[tuple[int, ...], ...]
    initial: frozenset[int]
    final_sets: tuple[frozenset[int], ...]
    subformulas: tuple[Formula, ...] | None = None
    _anchors: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.labels)
        if len(self.delta) != len(self.alphabet):
            raise AutomatonError("transition table needs one row per letter")
        for row in self.delta:
            if len(row) != n or any(not 0 <= q < n for q in row):
                raise AutomatonError("transition table is not total on the states")
        for s in (self.initial, *self.final_sets):
            if any(not 0 <= q < n for q in s):
                raise AutomatonError("initial/final sets must be subsets of the states")

    @classmethod
    def from_table(cls, alphabet, delta: dict, initial: Iterable[int], final_sets,
                   labels: Sequence | None = None) -> "Gcma":
        """Build from ``delta[letter] = [a.0, a.1, ...]``."""
        alphabet = Alphabet(alphabet)
        rows = tuple(tuple(int(q) for q in delta[a]) for a in alphabet)
        n = len(rows[0])
        labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        return cls(alphabet, labels, rows, frozenset(initial),
                   tuple(frozenset(f) for f in final_sets))

    @property
    def n_states(self) -> int:
        return len(self.labels)

    @property
    def states(self) -> range:
        return range(self.n_states)

    def delta_array(self) -> np.ndarray:
        return np.asarray(self.delta, dtype=np.int64).reshape(len(self.alphabet), self.n_states)

    def final_masks(self) -> list[int]:
        """Per state, the bitmask of final sets that contain it."""
        masks = [0] * self.n_states
        for k, f in enumerate(self.final_sets):
            for q in f:
                masks[q] |= 1 << k
        return masks

    @property
    def full_mask(self) -> int:
        return (1 << len(self.final_sets)) - 1

    def letter_ids(self, word: Iterable[str]) -> list[int]:
        return [self.alphabet.index(a) for a in word]

    def apply(self, word: Sequence[str], q: int) -> int:
        """``word . q``: letters applied right to left."""
        for c in reversed(self.letter_ids(word)):
            q = self.delta[c][q]
        return q

    def is_empty_language(self) -> bool:
        return not self.initial

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "states": [{"id": q, "label": _label_text(l)} for q, l in enumerate(self.labels)],
            "initial": sorted(self.initial),
            "final_sets": [sorted(f) for f in self.final_sets],
            "delta": {a: list(self.delta[i]) for i, a in enumerate(self.alphabet)},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "Gcma":
        states = sorted(data["states"], key=lambda s: s["id"])
        return cls.from_table(data["alphabet"], data["delta"], data["initial"],
                              data["final_sets"], [s["label"] for s in states])

    def to_dot(self, name: str = "gcma") -> str:
        """Edges ``p -> q`` labelled ``a`` stand for ``p = a.q``."""
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        in_all_finals = set(self.states)
        for f in self.final_sets:
            in_all_finals &= f
        for q in self.states:
            shape = "doublecircle" if self.final_sets and q in in_all_finals else "circle"
            lines.append(f'  {q} [label="{_dot_escape(_label_text(self.labels[q]))}", shape={shape}];')
        for q in sorted(self.initial):
            lines.append(f'  init{q} [shape=point]; init{q} -> {q};')
        for (p, q), letters in sorted(self._edges().items()):
            lines.append(f'  {p} -> {q} [label="{",".join(letters)}"];')
        if self.final_sets:
            for k, f in enumerate(self.final_sets):
                lines.append(f'  // final set {k}: {{{", ".join(map(str, sorted(f)))}}}')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def _edges(self) -> dict:
        edges: dict = {}
        for i, a in enumerate(self.alphabet):
            for q in self.states:
                edges.setdefault((self.delta[i][q], q), []).append(a)
        return edges


def _label_text(label) -> str:
    if isinstance(label, frozenset):
        return "{" + ", ".join(sorted(label)) + "}"
    return str(label)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


# -- tableau construction ---------------------------------------------------

_OPCODES = {
    Letter: _kernels.OP_LETTER, And: _kernels.OP_AND, Or: _kernels.OP_OR,
    Next: _kernels.OP_NEXT, Eventually: _kernels.OP_EVENTUALLY, Always: _kernels.OP_ALWAYS,
    Until: _kernels.OP_UNTIL, Release: _kernels.OP_RELEASE,
}


def build_gcma(phi: Formula, alphabet: Alphabet, max_sub: int = DEFAULT_MAX_SUB) -> Gcma:
    """Subset tableau of an NNF formula: one state per set of subformulas.

    The state a run occupies at position ``i`` is the set of subformulas
    holding on the suffix from ``i``; final sets rule out postponing
    eventualities forever and require G/R to hold once their argument
    holds from some point on.
    """
    if not is_nnf(phi):
        raise AutomatonError("build_gcma expects a formula in negation normal form")
    alphabet = Alphabet(alphabet)
    subs = subformulas(phi)
    n = len(subs)
    if n > max_sub:
        raise SizeGuardError(f"{n} subformulas exceed the cap of {max_sub}")
    pos = {f: i for i, f in enumerate(subs)}
    ops, left, right = [], [], []
    for f in subs:
        if isinstance(f, Letter):
            ops.append(_kernels.OP_LETTER)
            left.append(alphabet.index(f.name))
            right.append(0)
        elif isinstance(f, Const):
            ops.append(_kernels.OP_TRUE if f.value else _kernels.OP_FALSE)
            left.append(0)
            right.append(0)
        else:
            ops.append(_OPCODES[type(f)])
            kids = f.children()
            left.append(pos[kids[0]])
            right.append(pos[kids[-1]])
    table = _kernels.tableau_delta(ops, left, right, len(alphabet))
    masks = np.arange(1 << n, dtype=np.int64)

    def has(i):
        return (masks >> i) & 1 == 1

    final_sets = []
    for i, f in enumerate(subs):
        if isinstance(f, Eventually):
            sel = has(pos[f.arg]) | ~has(i)
        elif isinstance(f, Always):
            sel = has(i) | ~has(pos[f.arg])
        elif isinstance(f, Until):
            sel = has(pos[f.right]) | ~has(i)
        elif isinstance(f, Release):
            sel = has(i) | ~has(pos[f.right])
        else:
            continue
        final_sets.append(frozenset(np.nonzero(sel)[0].tolist()))
    initial = frozenset(np.nonzero(has(pos[phi]))[0].tolist())
    texts = [to_text(f) for f in subs]
    labels = tuple(frozenset(texts[i] for i in range(n) if m >> i & 1) for m in range(1 << n))
    delta = tuple(tuple(row) for row in table.tolist())
    return Gcma(alphabet, labels, delta, initial, tuple(final_sets), subs)


def trim(A: Gcma) -> Gcma:
    """Keep the states that occur in some final run.

    Such states are those from which a path (edges ``a.q -> q``) leads into
    a strongly connected component that has an edge and meets every final
    set. That set is closed under the transitions, so the restricted
    table stays total.
    """
    n = A.n_states
    if n == 0:
        return A
    src, dst = [], []
    for row in A.delta:
        src.extend(row)
        dst.extend(range(n))
    graph = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    n_comp, comp = connected_components(graph, directed=True, connection="strong")
    comp = comp.tolist()
    size = [0] * n_comp
    for c in comp:
        size[c] += 1
    has_edge = [s > 1 for s in size]
    for p, q in zip(src, dst):
        if p == q:
            has_edge[comp[q]] = True
    hits = [0] * n_comp
    fm = A.final_masks()
    for q in range(n):
        hits[comp[q]] |= fm[q]
    viable = [has_edge[c] and hits[c] == A.full_mask for c in range(n_comp)]
    keep = [False] * n
    stack = [q for q in range(n) if viable[comp[q]]]
    for q in stack:
        keep[q] = True
    while stack:
        q = stack.pop()
        for row in A.delta:
            p = row[q]
            if not keep[p]:
                keep[p] = True
                stack.append(p)
    kept = [q for q in range(n) if keep[q]]
    if len(kept) == n:
        return A
    index = {q: i for i, q in enumerate(kept)}
    delta = tuple(tuple(index[row[q]] for q in kept) for row in A.delta)
    return Gcma(
        A.alphabet,
        tuple(A.labels[q] for q in kept),
        delta,
        frozenset(index[q] for q in A.initial if keep[q]),
        tuple(frozenset(index[q] for q in f if keep[q]) for f in A.final_sets),
        A.subformulas,
    )


def state_of_label(A: Gcma, label: Iterable[str]) -> int:
    """Index of the state whose label is the given set of subformula texts."""
    want = frozenset(label)
    for q, l in enumerate(A.labels):
        if l == want:
            return q
    raise KeyError(f"no state labelled {sorted(want)}")


# -- loops and membership ---------------------------------------------------

def is_loop(A: Gcma, word_ids: Sequence[int], q: int, fmasks: Sequence[int] | None = None) -> bool:
    """Whether the word (letter ids) is a loop at ``q``."""
    fm = fmasks if fmasks is not None else A.final_masks()
    seen = fm[q]
    p = q
    for c in reversed(word_ids):
        p = A.delta[c][p]
        seen |= fm[p]
    return p == q and seen == A.full_mask


def anchor_candidates(A: Gcma, word: Sequence[str]) -> list[int]:
    ids = A.letter_ids(word)
    fm = A.final_masks()
    return [q for q in A.states if is_loop(A, ids, q, fm)]


def anchor(A: Gcma, word: Sequence[str]) -> int:
    """The unique state at which ``word`` is a loop."""
    word = tuple(word)
    if not word:
        raise AutomatonError("anchors are defined for nonempty words only")
    cached = A._anchors.get(word)
    if cached is not None:
        return cached
    found = anchor_candidates(A, word)
    if len(found) != 1:
        raise AnchorError(
            f"word {''.join(word)!r} is a loop at {len(found)} states {found}; expected exactly one")
    with A._lock:
        A._anchors[word] = found[0]
    return found[0]


def start_state(A: Gcma, w: UPWord) -> int:
    """First state of the unique final run on ``w``."""
    return A.apply(w.x, anchor(A, w.y))


def accepts(A: Gcma, w: UPWord) -> bool:
    if A.n_states == 0:
        return False
    return start_state(A, w.canonical()) in A.initial


def final_run_prefix(A: Gcma, w: UPWord, n: int) -> list[int]:
    """States ``r(0), ..., r(n)`` of the unique final run on ``w``."""
    q = anchor(A, w.y)
    loop = [A.apply(w.y[j:], q) for j in range(len(w.y))]
    run = []
    for i in range(n + 1):
        if i < len(w.x):
            run.append(A.apply(w.x[i:], q))
        else:
            run.append(loop[(i - len(w.x)) % len(w.y)])
    return run


def fig1_automaton() -> Gcma:
    """Four-state automaton for ``(a+b)* b^omega``."""
    return Gcma.from_table(
        "ab",
        {"a": [0, 0, 2, 2], "b": [0, 1, 3, 3]},
        initial={0, 1},
        final_sets=[{1, 2}],
    )
