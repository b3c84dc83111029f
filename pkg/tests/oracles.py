"""Brute-force reference implementations used by the tests.

None of these share code with the package beyond the data classes: they
enumerate words, positions or transformations directly.
"""
import itertools
from functools import lru_cache

from ltlfrag.ltl import (
    Always, And, Const, Eventually, Letter, Next, Not, Or, Release, UPWord, Until,
)


def words(alphabet, lo, hi):
    for n in range(lo, hi + 1):
        yield from itertools.product(alphabet, repeat=n)


# -- semantics -----------------------------------------------------------------

def naive_eval(phi, w: UPWord) -> bool:
    """Recursive evaluation on absolute positions.

    From position ``i`` every distinct suffix shows up within ``len(w)``
    steps, so F and U only need to look that far ahead.
    """
    horizon = len(w.x) + len(w.y)

    @lru_cache(maxsize=None)
    def holds(f, i):
        if isinstance(f, Letter):
            return _letter(w, i) == f.name
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Not):
            return not holds(f.arg, i)
        if isinstance(f, And):
            return holds(f.left, i) and holds(f.right, i)
        if isinstance(f, Or):
            return holds(f.left, i) or holds(f.right, i)
        if isinstance(f, Next):
            return holds(f.arg, i + 1)
        if isinstance(f, Eventually):
            return any(holds(f.arg, j) for j in range(i, i + horizon))
        if isinstance(f, Always):
            return all(holds(f.arg, j) for j in range(i, i + horizon))
        if isinstance(f, Until):
            for j in range(i, i + horizon):
                if holds(f.right, j):
                    return True
                if not holds(f.left, j):
                    return False
            return False
        if isinstance(f, Release):
            # dual of until
            for j in range(i, i + horizon):
                if not holds(f.right, j):
                    return False
                if holds(f.left, j):
                    return True
            return True
        raise TypeError(f)

    return holds(phi, 0)


def _letter(w: UPWord, i: int) -> str:
    if i < len(w.x):
        return w.x[i]
    return w.y[(i - len(w.x)) % len(w.y)]


def fig1_member(w: UPWord) -> bool:
    """Membership in (a+b)* b^omega."""
    return set(w.y) == {"b"}


# -- automata ----------------------------------------------------------------------

def step(A, a, q):
    return A.delta[A.alphabet.index(a)][q]


def naive_is_loop(A, u, q) -> bool:
    """Walk ``u`` right to left from ``q`` and record every visited state."""
    if not u:
        return False
    seen = [q]
    s = q
    for a in reversed(u):
        s = step(A, a, s)
        seen.append(s)
    if s != q:
        return False
    return all(any(p in F for p in seen) for F in A.final_sets)


def naive_anchors(A, u):
    return [q for q in range(A.n_states) if naive_is_loop(A, u, q)]


def naive_accepts(A, w: UPWord) -> bool:
    (q,) = naive_anchors(A, w.y)
    for a in reversed(w.x):
        q = step(A, a, q)
    return q in A.initial


def bounded_congruence(A, length):
    """Partition of states by the set of words ``u`` (``|u| <= length``,
    including the empty word) with ``u . q`` initial. Returned as a set of
    frozensets of states."""
    sig = {}
    ws = [()] + list(words(A.alphabet, 1, length))
    for q in range(A.n_states):
        key = []
        for u in ws:
            s = q
            for a in reversed(u):
                s = step(A, a, s)
            key.append(s in A.initial)
        sig.setdefault(tuple(key), set()).add(q)
    return {frozenset(v) for v in sig.values()}


def blocks(partition):
    out = {}
    for q, c in enumerate(partition.class_of):
        out.setdefault(c, set()).add(q)
    return {frozenset(v) for v in out.values()}


# -- quotient patterns via the transformation monoid ----------------------------------

def monoid(Q, cap=20000):
    """Transformations of the classes induced by nonempty words, or ``None``
    when there are more than ``cap`` of them."""
    gens = [tuple(row) for row in Q.circ]
    seen = set(gens)
    todo = list(gens)
    while todo:
        f = todo.pop()
        for g in gens:
            # g after f: apply f's word first, then the letter on the left
            h = tuple(g[f[c]] for c in range(Q.n_classes))
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    return None
                todo.append(h)
    return seen


def _reach(M, n):
    return {(c, f[c]) for f in M for c in range(n)}


def brute_patterns(Q):
    """Set of pattern names present in the quotient, or ``None`` if the
    monoid is too large to enumerate."""
    M = monoid(Q)
    if M is None:
        return None
    n = Q.n_classes
    reach = _reach(M, n)
    found = set()
    for f in M:
        for p, q in itertools.permutations(range(n), 2):
            if f[p] == p and f[q] == q:
                found.add("T1")
                if (q, p) in reach and (p, q) in reach:
                    found.add("T4")
    for r, s in itertools.permutations(range(n), 2):
        if (r, s) in reach and (s, r) in reach:
            if any(row[r] != row[s] for row in Q.circ):
                found.add("T2")
    for r in range(n):
        for row in Q.circ:
            if row[row[r]] != row[r]:
                found.add("T3")
    return found


# -- loop-language properties on bounded words ----------------------------------------

def anchor_class(A, P, u):
    (q,) = naive_anchors(A, u)
    return P.class_of[q]


def occ_conflict(A, P, length):
    """Two nonempty words with the same set of letters anchored in
    different classes of ``P``, or ``None``."""
    first = {}
    for u in words(A.alphabet, 1, length):
        key = frozenset(u)
        c = anchor_class(A, P, u)
        if key in first and first[key][1] != c:
            return first[key][0], u
        first.setdefault(key, (u, c))
    return None


def stutter_conflict(A, P, length):
    """``uav`` and ``uaav`` anchored in different classes, ``|uav| <= length``."""
    for w in words(A.alphabet, 1, length):
        for i in range(len(w)):
            w2 = w[:i + 1] + w[i:]
            if anchor_class(A, P, w) != anchor_class(A, P, w2):
                return w, w2
    return None


def profile(word, k):
    """Prefix and suffix of length ``k - 1`` and factors of length ``k``."""
    if len(word) < k:
        return ("short", tuple(word))
    return (tuple(word[:k - 1]), tuple(word[len(word) - k + 1:]),
            frozenset(tuple(word[i:i + k]) for i in range(len(word) - k + 1)))


def lt_conflict(member, alphabet, k, length):
    """Two words of length ``<= length`` with the same ``k``-profile and
    different membership, or ``None``."""
    seen = {}
    for w in words(alphabet, 1, length):
        key = profile(w, k)
        m = member(w)
        if key in seen and seen[key][1] != m:
            return seen[key][0], w
        seen.setdefault(key, (w, m))
    return None


def locally_testable_bounded(member, alphabet, max_k, slack=4):
    """Smallest ``k <= max_k`` with no profile conflict among words of length
    at most ``2k + slack``, or ``None``. Words shorter than ``k`` are
    compared whole, so conflicts need length about ``2k`` to show up."""
    for k in range(1, max_k + 1):
        if lt_conflict(member, alphabet, k, 2 * k + slack) is None:
            return k
    return None


# -- Ehrenfeucht-Fraisse games by recursion -------------------------------------------

def naive_duplicator(u: UPWord, v: UPWord, ops, k):
    """Whether Duplicator survives ``k`` rounds from the first positions,
    by direct recursion over lasso positions."""

    def succ(w, p):
        return p + 1 if p + 1 < len(w) else len(w.x)

    def later(w, p, strict):
        out, q = [], succ(w, p) if strict else p
        for _ in range(len(w)):
            out.append(q)
            q = succ(w, q)
        return sorted(set(out))

    def letter(w, p):
        return w.x[p] if p < len(w.x) else w.y[p - len(w.x)]

    @lru_cache(maxsize=None)
    def win(i, j, r):
        if letter(u, i) != letter(v, j):
            return False
        if r == 0:
            return True
        if "X" in ops and not win(succ(u, i), succ(v, j), r - 1):
            return False
        for strict in [s for s, name in ((False, "F"), (True, "SF")) if name in ops]:
            lu, lv = later(u, i, strict), later(v, j, strict)
            if any(not any(win(a, b, r - 1) for b in lv) for a in lu):
                return False
            if any(not any(win(a, b, r - 1) for a in lu) for b in lv):
                return False
        return True

    return win(0, 0, k)
