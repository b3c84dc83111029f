"""Pure-Python versions of the hot loops. Same signatures as ``_core``."""
from collections import deque

import numpy as np

OP_LETTER, OP_TRUE, OP_FALSE, OP_AND, OP_OR, OP_NEXT, OP_EVENTUALLY, OP_ALWAYS, OP_UNTIL, OP_RELEASE = range(10)

MODE_STUTTER = 0
MODE_SWAP = 1


def tableau_delta(ops, left, right, n_letters):
    """Transition table of the subset tableau.

    ``ops``/``left``/``right`` describe the subformulas in post-order; a
    state is a bitmask over them. Returns ``table[letter, state]``.
    """
    ops = [int(o) for o in ops]
    left = [int(v) for v in left]
    right = [int(v) for v in right]
    n = len(ops)
    size = 1 << n
    out = np.empty((n_letters, size), dtype=np.int64)
    for c in range(n_letters):
        row = [0] * size
        for phi in range(size):
            psi = 0
            for i in range(n):
                op = ops[i]
                if op == OP_LETTER:
                    on = left[i] == c
                elif op == OP_TRUE:
                    on = True
                elif op == OP_FALSE:
                    on = False
                elif op == OP_AND:
                    on = (psi >> left[i]) & 1 and (psi >> right[i]) & 1
                elif op == OP_OR:
                    on = (psi >> left[i]) & 1 or (psi >> right[i]) & 1
                elif op == OP_NEXT:
                    on = (phi >> left[i]) & 1
                elif op == OP_EVENTUALLY:
                    on = (psi >> left[i]) & 1 or (phi >> i) & 1
                elif op == OP_ALWAYS:
                    on = (psi >> left[i]) & 1 and (phi >> i) & 1
                elif op == OP_UNTIL:
                    on = (psi >> right[i]) & 1 or ((psi >> left[i]) & 1 and (phi >> i) & 1)
                else:
                    on = (psi >> right[i]) & 1 and ((psi >> left[i]) & 1 or (phi >> i) & 1)
                if on:
                    psi |= 1 << i
            row[phi] = psi
        out[c] = row
    return out


def loop_product_search(delta, fmask, full, p0, q0, mode):
    """Shortest pair of loops ``(w1 at p0, w2 at q0)`` with
    ``w1 = u a v``/``w2 = u a a v`` (stutter) or ``w1 = u a b v``/
    ``w2 = u b a v`` (swap, a != b).

    Words are read reversed. Returns ``(v_rev, a, b, u_rev)`` as letter
    index lists (``b == -1`` for stutter) or ``None``.
    """
    delta = [list(map(int, row)) for row in delta]
    fmask = [int(v) for v in fmask]
    n_letters = len(delta)

    def step(p, t, c):
        p = delta[c][p]
        return p, t | fmask[p]

    start = (0, p0, fmask[p0], q0, fmask[q0])
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        phase, p, tp, q, tq = node
        if phase == 1 and p == p0 and q == q0 and tp == full and tq == full:
            return _decode(parent, node)
        succ = []
        for c in range(n_letters):
            p1, tp1 = step(p, tp, c)
            q1, tq1 = step(q, tq, c)
            succ.append(((phase, p1, tp1, q1, tq1), (c,)))
        if phase == 0:
            for a in range(n_letters):
                if mode == MODE_STUTTER:
                    p1, tp1 = step(p, tp, a)
                    q1, tq1 = step(*step(q, tq, a), a)
                    succ.append(((1, p1, tp1, q1, tq1), (-1, a, -1)))
                else:
                    for b in range(n_letters):
                        if a == b:
                            continue
                        # first reads b then a, second reads a then b
                        p1, tp1 = step(*step(p, tp, b), a)
                        q1, tq1 = step(*step(q, tq, a), b)
                        succ.append(((1, p1, tp1, q1, tq1), (-1, a, b)))
        for nxt, label in succ:
            if nxt not in parent:
                parent[nxt] = (node, label)
                queue.append(nxt)
    return None


def _decode(parent, node):
    v_rev, u_rev = [], []
    a = b = -1
    while parent[node] is not None:
        node, label = parent[node]
        if label[0] == -1:
            a, b = label[1], label[2]
        elif node[0] == 0:
            v_rev.append(label[0])
        else:
            u_rev.append(label[0])
    v_rev.reverse()
    u_rev.reverse()
    return v_rev, a, b, u_rev


def ef_tables(w1, loop1, w2, loop2, use_x, use_f, use_sf, rounds):
    """Duplicator-wins tables of the EF game on two lassos.

    ``w1``/``w2`` are letter ids at lasso positions, ``loop1``/``loop2``
    the loop start indices. Entry ``[k, i, j]`` is true when Duplicator
    survives ``k`` rounds from positions ``(i, j)``.
    """
    w1 = [int(v) for v in w1]
    w2 = [int(v) for v in w2]
    n1, n2 = len(w1), len(w2)
    succ1 = [i + 1 if i + 1 < n1 else loop1 for i in range(n1)]
    succ2 = [j + 1 if j + 1 < n2 else loop2 for j in range(n2)]
    # positions reachable from i form the interval [from1[i], n1)
    from1 = [i if i < loop1 else loop1 for i in range(n1)]
    from2 = [j if j < loop2 else loop2 for j in range(n2)]
    out = np.zeros((rounds + 1, n1, n2), dtype=np.uint8)
    base = [[w1[i] == w2[j] for j in range(n2)] for i in range(n1)]
    out[0] = base
    cur = base
    for k in range(1, rounds + 1):
        if use_f or use_sf:
            fwd = _forward_table(cur, n1, n2)
        new = []
        for i in range(n1):
            new_row = []
            for j in range(n2):
                ok = base[i][j]
                if ok and use_x:
                    ok = cur[succ1[i]][succ2[j]]
                if ok and use_f:
                    ok = fwd[from1[i]][from2[j]]
                if ok and use_sf:
                    ok = fwd[from1[succ1[i]]][from2[succ2[j]]]
                new_row.append(bool(ok))
            new.append(new_row)
        out[k] = new
        cur = new
    return out


def _forward_table(cur, n1, n2):
    """``fwd[s1][s2]``: from suffixes starting at s1/s2, Duplicator can
    answer every forward move of Spoiler in either word."""
    # row_any[i][t]: some j >= t with cur[i][j]
    row_any = []
    for i in range(n1):
        acc = [False] * (n2 + 1)
        row = cur[i]
        for t in range(n2 - 1, -1, -1):
            acc[t] = acc[t + 1] or row[t]
        row_any.append(acc)
    # col_any[j][t]: some i >= t with cur[i][j]
    col_any = []
    for j in range(n2):
        acc = [False] * (n1 + 1)
        for t in range(n1 - 1, -1, -1):
            acc[t] = acc[t + 1] or cur[t][j]
        col_any.append(acc)
    # all1[s1][s2]: every i >= s1 has row_any[i][s2]
    all1 = [[True] * n2 for _ in range(n1 + 1)]
    for s1 in range(n1 - 1, -1, -1):
        nxt, here, ra = all1[s1 + 1], all1[s1], row_any[s1]
        for s2 in range(n2):
            here[s2] = nxt[s2] and ra[s2]
    # all2[s2][s1]: every j >= s2 has col_any[j][s1]
    all2 = [[True] * n1 for _ in range(n2 + 1)]
    for s2 in range(n2 - 1, -1, -1):
        nxt, here, ca = all2[s2 + 1], all2[s2], col_any[s2]
        for s1 in range(n1):
            here[s1] = nxt[s1] and ca[s1]
    return [[all1[s1][s2] and all2[s2][s1] for s2 in range(n2)] for s1 in range(n1)]
