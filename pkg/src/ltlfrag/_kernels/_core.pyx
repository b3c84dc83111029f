# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled versions of the hot loops. Same signatures as ``_fallback``."""
import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map

cnp.import_array()

cdef enum:
    OP_LETTER = 0
    OP_TRUE = 1
    OP_FALSE = 2
    OP_AND = 3
    OP_OR = 4
    OP_NEXT = 5
    OP_EVENTUALLY = 6
    OP_ALWAYS = 7
    OP_UNTIL = 8
    OP_RELEASE = 9

MODE_STUTTER = 0
MODE_SWAP = 1


def tableau_delta(ops, left, right, int n_letters):
    cdef cnp.int64_t[:] o = np.asarray(ops, dtype=np.int64)
    cdef cnp.int64_t[:] l = np.asarray(left, dtype=np.int64)
    cdef cnp.int64_t[:] r = np.asarray(right, dtype=np.int64)
    cdef int n = o.shape[0]
    cdef long long size = 1LL << n
    out_arr = np.empty((n_letters, size), dtype=np.int64)
    cdef cnp.int64_t[:, :] out = out_arr
    cdef int c, i, op
    cdef long long phi, psi
    cdef bint on
    for c in range(n_letters):
        for phi in range(size):
            psi = 0
            for i in range(n):
                op = o[i]
                if op == OP_LETTER:
                    on = l[i] == c
                elif op == OP_TRUE:
                    on = True
                elif op == OP_FALSE:
                    on = False
                elif op == OP_AND:
                    on = ((psi >> l[i]) & 1) and ((psi >> r[i]) & 1)
                elif op == OP_OR:
                    on = ((psi >> l[i]) & 1) or ((psi >> r[i]) & 1)
                elif op == OP_NEXT:
                    on = (phi >> l[i]) & 1
                elif op == OP_EVENTUALLY:
                    on = ((psi >> l[i]) & 1) or ((phi >> i) & 1)
                elif op == OP_ALWAYS:
                    on = ((psi >> l[i]) & 1) and ((phi >> i) & 1)
                elif op == OP_UNTIL:
                    on = ((psi >> r[i]) & 1) or (((psi >> l[i]) & 1) and ((phi >> i) & 1))
                else:
                    on = ((psi >> r[i]) & 1) and (((psi >> l[i]) & 1) or ((phi >> i) & 1))
                if on:
                    psi |= 1LL << i
            out[c, phi] = psi
    return out_arr


cdef inline long long _pack(long long phase, long long p, long long tp, long long q, long long tq,
                            long long n, long long m) nogil:
    return (((phase * n + p) * m + tp) * n + q) * m + tq


def loop_product_search(delta, fmask, long long full, long long p0, long long q0, int mode):
    cdef cnp.int64_t[:, :] d = np.ascontiguousarray(delta, dtype=np.int64)
    cdef cnp.int64_t[:] fm = np.ascontiguousarray(fmask, dtype=np.int64)
    cdef int n_letters = d.shape[0]
    cdef long long n = d.shape[1]
    cdef long long m = full + 1
    cdef unordered_map[long long, long long] parent   # node -> parent node
    cdef unordered_map[long long, long long] label    # node -> edge label
    cdef vector[long long] queue
    cdef size_t head = 0
    cdef long long start, node, nxt, phase, p, tp, q, tq, p1, tp1, q1, tq1, rest
    cdef int a, b, c
    start = _pack(0, p0, fm[p0], q0, fm[q0], n, m)
    parent[start] = -1
    queue.push_back(start)
    while head < queue.size():
        node = queue[head]
        head += 1
        rest = node
        tq = rest % m; rest //= m
        q = rest % n; rest //= n
        tp = rest % m; rest //= m
        p = rest % n; rest //= n
        phase = rest
        if phase == 1 and p == p0 and q == q0 and tp == full and tq == full:
            return _decode(parent, label, node, n, m, n_letters)
        for c in range(n_letters):
            p1 = d[c, p]; tp1 = tp | fm[p1]
            q1 = d[c, q]; tq1 = tq | fm[q1]
            nxt = _pack(phase, p1, tp1, q1, tq1, n, m)
            if parent.count(nxt) == 0:
                parent[nxt] = node
                label[nxt] = c
                queue.push_back(nxt)
        if phase == 0:
            for a in range(n_letters):
                if mode == MODE_STUTTER:
                    p1 = d[a, p]; tp1 = tp | fm[p1]
                    q1 = d[a, q]; tq1 = tq | fm[q1]
                    q1 = d[a, q1]; tq1 = tq1 | fm[q1]
                    nxt = _pack(1, p1, tp1, q1, tq1, n, m)
                    if parent.count(nxt) == 0:
                        parent[nxt] = node
                        label[nxt] = -1 - (a * (n_letters + 1) + n_letters)
                        queue.push_back(nxt)
                else:
                    for b in range(n_letters):
                        if a == b:
                            continue
                        p1 = d[b, p]; tp1 = tp | fm[p1]
                        p1 = d[a, p1]; tp1 = tp1 | fm[p1]
                        q1 = d[a, q]; tq1 = tq | fm[q1]
                        q1 = d[b, q1]; tq1 = tq1 | fm[q1]
                        nxt = _pack(1, p1, tp1, q1, tq1, n, m)
                        if parent.count(nxt) == 0:
                            parent[nxt] = node
                            label[nxt] = -1 - (a * (n_letters + 1) + b)
                            queue.push_back(nxt)
    return None


cdef _decode(unordered_map[long long, long long]& parent, unordered_map[long long, long long]& label,
             long long node, long long n, long long m, int n_letters):
    # pivot labels are -1 - (a * (L + 1) + b), with b == L for the stutter case
    v_rev = []
    u_rev = []
    cdef long long lab, prev, code
    a = b = -1
    while parent[node] != -1:
        prev = parent[node]
        lab = label[node]
        if lab < 0:
            code = -1 - lab
            a = int(code // (n_letters + 1))
            b = int(code % (n_letters + 1))
            if b == n_letters:
                b = -1
        elif prev // (n * m * n * m) == 0:
            v_rev.append(int(lab))
        else:
            u_rev.append(int(lab))
        node = prev
    v_rev.reverse()
    u_rev.reverse()
    return v_rev, a, b, u_rev


def ef_tables(w1, long long loop1, w2, long long loop2, bint use_x, bint use_f, bint use_sf, int rounds):
    cdef cnp.int64_t[:] a1 = np.asarray(w1, dtype=np.int64)
    cdef cnp.int64_t[:] a2 = np.asarray(w2, dtype=np.int64)
    cdef Py_ssize_t n1 = a1.shape[0], n2 = a2.shape[0]
    out_arr = np.zeros((rounds + 1, n1, n2), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, :] out = out_arr
    cdef cnp.uint8_t[:, :] row_any = np.zeros((n1, n2 + 1), dtype=np.uint8)
    cdef cnp.uint8_t[:, :] col_any = np.zeros((n2, n1 + 1), dtype=np.uint8)
    cdef cnp.uint8_t[:, :] all1 = np.ones((n1 + 1, n2), dtype=np.uint8)
    cdef cnp.uint8_t[:, :] all2 = np.ones((n2 + 1, n1), dtype=np.uint8)
    cdef Py_ssize_t i, j, t, k, s1, s2
    cdef cnp.int64_t[:] succ1 = np.empty(n1, dtype=np.int64)
    cdef cnp.int64_t[:] succ2 = np.empty(n2, dtype=np.int64)
    cdef cnp.int64_t[:] from1 = np.empty(n1, dtype=np.int64)
    cdef cnp.int64_t[:] from2 = np.empty(n2, dtype=np.int64)
    cdef bint ok
    for i in range(n1):
        succ1[i] = i + 1 if i + 1 < n1 else loop1
        from1[i] = i if i < loop1 else loop1
    for j in range(n2):
        succ2[j] = j + 1 if j + 1 < n2 else loop2
        from2[j] = j if j < loop2 else loop2
    for i in range(n1):
        for j in range(n2):
            out[0, i, j] = a1[i] == a2[j]
    for k in range(1, rounds + 1):
        if use_f or use_sf:
            for i in range(n1):
                row_any[i, n2] = 0
                for t in range(n2 - 1, -1, -1):
                    row_any[i, t] = row_any[i, t + 1] | out[k - 1, i, t]
            for j in range(n2):
                col_any[j, n1] = 0
                for t in range(n1 - 1, -1, -1):
                    col_any[j, t] = col_any[j, t + 1] | out[k - 1, t, j]
            for s2 in range(n2):
                all1[n1, s2] = 1
            for s1 in range(n1 - 1, -1, -1):
                for s2 in range(n2):
                    all1[s1, s2] = all1[s1 + 1, s2] & row_any[s1, s2]
            for s1 in range(n1):
                all2[n2, s1] = 1
            for s2 in range(n2 - 1, -1, -1):
                for s1 in range(n1):
                    all2[s2, s1] = all2[s2 + 1, s1] & col_any[s2, s1]
        for i in range(n1):
            for j in range(n2):
                ok = out[0, i, j]
                if ok and use_x:
                    ok = out[k - 1, succ1[i], succ2[j]]
                if ok and use_f:
                    ok = all1[from1[i], from2[j]] and all2[from2[j], from1[i]]
                if ok and use_sf:
                    s1 = from1[succ1[i]]
                    s2 = from2[succ2[j]]
                    ok = all1[s1, s2] and all2[s2, s1]
                out[k, i, j] = ok
    return out_arr
