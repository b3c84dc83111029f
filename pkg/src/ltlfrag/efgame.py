"""Ehrenfeucht-Fraisse games on ultimately periodic words.

Positions are lasso positions ``0 .. |x|+|y|-1`` of each word, so the game
graph is finite and solved exactly by iterating round tables. Supported
moves: ``X`` (both players step once), ``F`` (Spoiler jumps forward in one
word, possibly staying put, Duplicator answers in the other) and ``SF``
(the same, strictly forward). There is no until round.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import _kernels
from .ltl import Fragment, LtlError, UPWord

__all__ = ["GameConfig", "game_operators", "solve", "spoiler_wins",
           "strategy_trace", "certify_indistinguishable"]

_GAME_OPS = {
    Fragment.X: frozenset({"X"}),
    Fragment.F: frozenset({"F"}),
    Fragment.SF: frozenset({"SF"}),
    Fragment.XF: frozenset({"X", "F"}),
}


def game_operators(ops) -> frozenset[str]:
    """Normalize to a subset of ``{"X", "F", "SF"}``.

    A :class:`Fragment` maps to the moves of its game; strings may be
    comma separated.
    """
    if isinstance(ops, Fragment):
        if ops not in _GAME_OPS:
            raise LtlError(f"no game for fragment {ops}")
        return _GAME_OPS[ops]
    if isinstance(ops, str):
        if ops in Fragment.__members__:
            return game_operators(Fragment(ops))
        ops = [o for o in ops.replace("{", "").replace("}", "").split(",")]
    out = frozenset(o.strip().upper() for o in ops if o.strip())
    if not out or not out <= {"X", "F", "SF"}:
        raise LtlError(f"game moves must be a nonempty subset of X, F, SF; got {sorted(out)}")
    return out


@dataclass(frozen=True)
class GameConfig:
    """Lasso positions ``i`` (first word), ``j`` (second word) and the
    number of rounds left."""
    i: int
    j: int
    rounds: int


@dataclass
class _Solved:
    w1: UPWord
    w2: UPWord
    ops: frozenset
    tables: object  # uint8 array [k, i, j]: Duplicator survives k rounds

    def survives(self, k, i, j) -> bool:
        return bool(self.tables[k, i, j])


def solve(u: UPWord, v: UPWord, ops, k: int) -> _Solved:
    if k < 0:
        raise LtlError("number of rounds must be nonnegative")
    ops = game_operators(ops)
    ids: dict = {}
    a1 = [ids.setdefault(u.letter(p), len(ids)) for p in range(len(u))]
    a2 = [ids.setdefault(v.letter(p), len(ids)) for p in range(len(v))]
    tables = _kernels.ef_tables(a1, u.loop_start, a2, v.loop_start,
                                "X" in ops, "F" in ops, "SF" in ops, int(k))
    return _Solved(u, v, ops, tables)


def spoiler_wins(u: UPWord, v: UPWord, ops, k: int) -> bool:
    """Whether Spoiler wins the game on ``(u, v)`` within ``k`` rounds."""
    return not solve(u, v, ops, k).survives(k, 0, 0)


def certify_indistinguishable(pair, ops, k: int) -> bool:
    """Duplicator survives ``k`` rounds on the two words of ``pair``."""
    return not spoiler_wins(pair.w1, pair.w2, ops, k)


def _reach(w: UPWord, p: int) -> range:
    return range(p if p < w.loop_start else w.loop_start, len(w))


def strategy_trace(u: UPWord, v: UPWord, ops, k: int) -> list[dict]:
    """One line of play of a winning Spoiler strategy.

    Each step records Spoiler's move and Duplicator's reply (the reply
    that survives longest). Empty when Duplicator wins.
    """
    g = solve(u, v, ops, k)
    if g.survives(k, 0, 0):
        return []
    trace: list[dict] = []
    i = j = 0
    left = k
    if not g.survives(0, i, j):
        return [{"move": "start", "positions": [0, 0],
                 "letters": [u.letter(0), v.letter(0)]}]
    while left > 0:
        step = _spoiler_move(g, i, j, left)
        if step is None:  # cannot happen when the table says Spoiler wins
            break
        trace.append(step)
        i, j = step["positions"]
        left -= 1
        if not g.survives(0, i, j):
            break
    return trace


def _depth(g: _Solved, i: int, j: int, cap: int) -> int:
    """Largest number of rounds Duplicator survives from (i, j), capped."""
    d = -1
    for r in range(cap + 1):
        if not g.survives(r, i, j):
            break
        d = r
    return d


def _spoiler_move(g: _Solved, i: int, j: int, left: int):
    u, v = g.w1, g.w2
    if "X" in g.ops and not g.survives(left - 1, u.successor(i), v.successor(j)):
        ni, nj = u.successor(i), v.successor(j)
        return {"move": "X", "positions": [ni, nj], "letters": [u.letter(ni), v.letter(nj)]}
    for op in ("F", "SF"):
        if op not in g.ops:
            continue
        si = i if op == "F" else u.successor(i)
        sj = j if op == "F" else v.successor(j)
        for side in (1, 2):
            mine = _reach(u, si) if side == 1 else _reach(v, sj)
            theirs = _reach(v, sj) if side == 1 else _reach(u, si)
            for s in mine:
                pairs = [(s, t) if side == 1 else (t, s) for t in theirs]
                if any(g.survives(left - 1, a, b) for a, b in pairs):
                    continue
                a, b = max(pairs, key=lambda ab: _depth(g, ab[0], ab[1], left - 1))
                return {"move": op, "word": side, "positions": [a, b],
                        "letters": [u.letter(a), v.letter(b)]}
    return None
