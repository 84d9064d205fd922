"""Compiled trivial-stabilizer test for digraphs given by adjacency lists.

This is an independent implementation of the search in ``graphaut``; it only
answers whether some non-identity automorphism fixes vertex 0, which for a
vertex-transitive digraph decides whether the automorphism group acts
regularly.  Partitions are stored nauty-style: ``lab`` lists the vertices in
cell order, ``cellof[v]`` is the start position of the cell holding ``v`` and
``csize[s]`` is the size of the cell starting at position ``s``.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

HAVE_NUMBA = njit is not None


def _jit(fn):
    return njit(cache=True, nogil=True)(fn) if HAVE_NUMBA else fn


@_jit
def _refine(n, optr, oidx, iptr, iidx, lab, pos, cellof, csize, queue, inq, qhead, qlen, oc, ic, mark, touched, tcells, keys):
    """Refine in place until the queue empties; returns the number of cells."""
    ncells = 0
    s = 0
    while s < n:
        ncells += 1
        s += csize[s]
    while qlen > 0 and ncells < n:
        w0 = queue[qhead]
        qhead = (qhead + 1) % n
        qlen -= 1
        inq[w0] = False
        wend = w0 + csize[w0]
        nt = 0
        for p in range(w0, wend):
            w = lab[p]
            for j in range(iptr[w], iptr[w + 1]):
                u = iidx[j]  # u -> w
                oc[u] += 1
                if not mark[u]:
                    mark[u] = True
                    touched[nt] = u
                    nt += 1
            for j in range(optr[w], optr[w + 1]):
                u = oidx[j]  # w -> u
                ic[u] += 1
                if not mark[u]:
                    mark[u] = True
                    touched[nt] = u
                    nt += 1
        # distinct non-singleton cells met by touched vertices, by position
        ntc = 0
        for t in range(nt):
            c = cellof[touched[t]]
            if csize[c] > 1 and keys[c] != -2:
                keys[c] = -2
                tcells[ntc] = c
                ntc += 1
        tc = tcells[:ntc]
        tc.sort()
        for t in range(ntc):
            keys[tc[t]] = 0
        for t in range(ntc):
            c = tc[t]
            m = csize[c]
            first = oc[lab[c]] * (n + 1) + ic[lab[c]]
            uniform = True
            for p in range(c, c + m):
                v = lab[p]
                k = oc[v] * (n + 1) + ic[v]
                keys[p] = k
                if k != first:
                    uniform = False
            if uniform:
                continue
            # insertion sort of the segment by key
            for p in range(c + 1, c + m):
                k = keys[p]
                v = lab[p]
                q = p - 1
                while q >= c and keys[q] > k:
                    keys[q + 1] = keys[q]
                    lab[q + 1] = lab[q]
                    q -= 1
                keys[q + 1] = k
                lab[q + 1] = v
            was_pending = inq[c]
            best = c
            bestsize = 0
            fs = c
            for p in range(c, c + m + 1):
                if p == c + m or (p > c and keys[p] != keys[p - 1]):
                    size = p - fs
                    csize[fs] = size
                    for r in range(fs, p):
                        cellof[lab[r]] = fs
                        pos[lab[r]] = r
                    if size > bestsize:
                        best = fs
                        bestsize = size
                    if fs != c:
                        ncells += 1
                    fs = p
            for p in range(c, c + m):
                keys[p] = 0
            fs = c
            while fs < c + m:
                if was_pending:
                    push = fs != c
                else:
                    push = fs != best
                if push and not inq[fs]:
                    inq[fs] = True
                    queue[(qhead + qlen) % n] = fs
                    qlen += 1
                fs += csize[fs]
        for t in range(nt):
            u = touched[t]
            oc[u] = 0
            ic[u] = 0
            mark[u] = False
    # drain so the queue is empty for the next call
    while qlen > 0:
        inq[queue[qhead]] = False
        qhead = (qhead + 1) % n
        qlen -= 1
    return ncells


@_jit
def _target(n, csize):
    best = -1
    size = 0
    s = 0
    while s < n:
        k = csize[s]
        if k > 1 and (best < 0 or k < size):
            best = s
            size = k
            if k == 2:
                break
        s += k
    return best


@_jit
def _individualize(n, v, optr, oidx, iptr, iidx, lab, pos, cellof, csize, queue, inq, oc, ic, mark, touched, tcells, keys):
    c = cellof[v]
    m = csize[c]
    p = pos[v]
    u = lab[c]
    lab[c] = v
    pos[v] = c
    lab[p] = u
    pos[u] = p
    csize[c] = 1
    csize[c + 1] = m - 1
    for r in range(c + 1, c + m):
        cellof[lab[r]] = c + 1
    queue[0] = c
    inq[c] = True
    return _refine(n, optr, oidx, iptr, iidx, lab, pos, cellof, csize, queue, inq, 0, 1, oc, ic, mark, touched, tcells, keys)


@_jit
def _same_shape(n, a, b):
    s = 0
    while s < n:
        if a[s] != b[s]:
            return False
        s += a[s]
    return True


@_jit
def _leaf_is_automorphism(n, optr, oidx, adj, lab1, lab2, sigma):
    for k in range(n):
        sigma[lab1[k]] = lab2[k]
    for v in range(n):
        sv = sigma[v]
        for j in range(optr[v], optr[v + 1]):
            if not adj[sv, sigma[oidx[j]]]:
                return False
    return True


@_jit
def trivial_vertex_stabilizer(n, optr, oidx, iptr, iidx, adj):
    """True when the only automorphism fixing vertex 0 is the identity."""
    if n <= 1:
        return True
    queue = np.zeros(n, np.int64)
    inq = np.zeros(n, np.bool_)
    oc = np.zeros(n, np.int64)
    ic = np.zeros(n, np.int64)
    mark = np.zeros(n, np.bool_)
    touched = np.zeros(n, np.int64)
    tcells = np.zeros(n, np.int64)
    keys = np.zeros(n, np.int64)
    sigma = np.zeros(n, np.int64)

    # root: {0} | rest, both queued because the unit partition need not be equitable
    lab = np.arange(n)
    pos = np.arange(n)
    cellof = np.ones(n, np.int64)
    cellof[0] = 0
    csize = np.zeros(n, np.int64)
    csize[0] = 1
    csize[1] = n - 1
    queue[0] = 0
    queue[1] = 1
    inq[0] = True
    inq[1] = True
    ncells = _refine(n, optr, oidx, iptr, iidx, lab, pos, cellof, csize, queue, inq, 0, 2, oc, ic, mark, touched, tcells, keys)
    if ncells == n:
        return True

    # first path; level j stores the partition before the j-th individualization
    L_lab = np.zeros((n + 1, n), np.int64)
    L_pos = np.zeros((n + 1, n), np.int64)
    L_cellof = np.zeros((n + 1, n), np.int64)
    L_csize = np.zeros((n + 1, n), np.int64)
    tgt = np.zeros(n + 1, np.int64)
    depth = 0
    while True:
        L_lab[depth] = lab
        L_pos[depth] = pos
        L_cellof[depth] = cellof
        L_csize[depth] = csize
        t = _target(n, csize)
        tgt[depth] = t
        if t < 0:
            break
        _individualize(n, lab[t], optr, oidx, iptr, iidx, lab, pos, cellof, csize, queue, inq, oc, ic, mark, touched, tcells, keys)
        depth += 1
    leaf = L_lab[depth]

    # DFS stack, one partition per level plus the next child index to try
    S_lab = np.zeros((n + 1, n), np.int64)
    S_pos = np.zeros((n + 1, n), np.int64)
    S_cellof = np.zeros((n + 1, n), np.int64)
    S_csize = np.zeros((n + 1, n), np.int64)
    nxt = np.zeros(n + 1, np.int64)
    for level in range(depth - 1, -1, -1):
        t = tgt[level]
        size = L_csize[level, t]
        for i in range(1, size):
            w = L_lab[level, t + i]
            S_lab[level + 1] = L_lab[level]
            S_pos[level + 1] = L_pos[level]
            S_cellof[level + 1] = L_cellof[level]
            S_csize[level + 1] = L_csize[level]
            _individualize(n, w, optr, oidx, iptr, iidx, S_lab[level + 1], S_pos[level + 1], S_cellof[level + 1], S_csize[level + 1], queue, inq, oc, ic, mark, touched, tcells, keys)
            if not _same_shape(n, S_csize[level + 1], L_csize[level + 1]):
                continue
            # explicit DFS below w
            d = level + 1
            nxt[d] = 0
            while d > level:
                if d == depth:
                    if _leaf_is_automorphism(n, optr, oidx, adj, leaf, S_lab[d], sigma):
                        return False
                    d -= 1
                    continue
                tt = tgt[d]
                k = nxt[d]
                if k >= S_csize[d, tt]:
                    d -= 1
                    continue
                nxt[d] = k + 1
                u = S_lab[d, tt + k]
                S_lab[d + 1] = S_lab[d]
                S_pos[d + 1] = S_pos[d]
                S_cellof[d + 1] = S_cellof[d]
                S_csize[d + 1] = S_csize[d]
                _individualize(n, u, optr, oidx, iptr, iidx, S_lab[d + 1], S_pos[d + 1], S_cellof[d + 1], S_csize[d + 1], queue, inq, oc, ic, mark, touched, tcells, keys)
                if _same_shape(n, S_csize[d + 1], L_csize[d + 1]):
                    d += 1
                    nxt[d] = 0
    return True


@_jit
def _cayley_lists(T, inv, chosen, k):
    n = T.shape[0]
    optr = np.arange(n + 1) * k
    iptr = optr.copy()
    oidx = np.zeros(n * k, np.int64)
    iidx = np.zeros(n * k, np.int64)
    adj = np.zeros((n, n), np.bool_)
    for g in range(n):
        for j in range(k):
            s = chosen[j]
            u = T[inv[s], g]
            oidx[g * k + j] = u
            iidx[g * k + j] = T[s, g]
            adj[g, u] = True
    return optr, oidx, iptr, iidx, adj


@_jit
def cayley_regular_flags(T, inv, units, select):
    """Row ``r`` of the result says whether the Cayley digraph on the union of
    the units selected by ``select[r]`` has a trivial vertex stabilizer.

    ``units`` holds element ids, one unit per row, padded with ``-1``.
    """
    n = T.shape[0]
    out = np.zeros(select.shape[0], np.bool_)
    chosen = np.zeros(n, np.int64)
    for r in range(select.shape[0]):
        k = 0
        for i in range(units.shape[0]):
            if select[r, i]:
                for j in range(units.shape[1]):
                    e = units[i, j]
                    if e >= 0:
                        chosen[k] = e
                        k += 1
        optr, oidx, iptr, iidx, adj = _cayley_lists(T, inv, chosen, k)
        out[r] = trivial_vertex_stabilizer(n, optr, oidx, iptr, iidx, adj)
    return out


def csr_lists(out_lists):
    """Adjacency-list arrays ``(optr, oidx, iptr, iidx, adj)`` for the kernel."""
    n = len(out_lists)
    adj = np.zeros((n, n), dtype=np.bool_)
    for v, nb in enumerate(out_lists):
        adj[v, list(nb)] = True
    optr = np.zeros(n + 1, dtype=np.int64)
    iptr = np.zeros(n + 1, dtype=np.int64)
    optr[1:] = np.cumsum(adj.sum(axis=1))
    iptr[1:] = np.cumsum(adj.sum(axis=0))
    oidx = np.nonzero(adj)[1].astype(np.int64)
    iidx = np.nonzero(adj.T)[1].astype(np.int64)
    return optr, oidx, iptr, iidx, adj
