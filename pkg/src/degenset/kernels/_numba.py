"""Compiled bitmask kernels.

Every kernel here has a twin of the same name and signature in
``_numpy.py``; the two are checked against each other in the test suite.
Vertex sets are int64 bitmasks, so these kernels assume n <= 62.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def popcount(x):
    count = 0
    while x:
        x &= x - 1
        count += 1
    return count


@njit(cache=True)
def _is_connected(adj, n):
    if n == 0:
        return True
    full = (1 << n) - 1
    seen = 1
    frontier = 1
    while frontier:
        grown = 0
        for v in range(n):
            if (frontier >> v) & 1:
                grown |= adj[v]
        frontier = grown & ~seen
        seen |= grown
    return seen == full


@njit(cache=True)
def graph_masks(n, start, stop, connected_only):
    """Adjacency masks of the labeled graphs with edge codes in [start, stop).

    Bit ``k`` of a code is the k-th pair of the upper triangle in column
    major order (0-1, 0-2, 1-2, 0-3, ...), the same order graph6 uses.
    """
    pu = np.empty(n * (n - 1) // 2, dtype=np.int64)
    pv = np.empty(n * (n - 1) // 2, dtype=np.int64)
    k = 0
    for j in range(1, n):
        for i in range(j):
            pu[k] = i
            pv[k] = j
            k += 1
    npairs = k
    codes = np.empty(stop - start, dtype=np.int64)
    adjs = np.zeros((stop - start, n), dtype=np.int64)
    adj = np.zeros(n, dtype=np.int64)
    out = 0
    for code in range(start, stop):
        adj[:] = 0
        for k in range(npairs):
            if (code >> k) & 1:
                adj[pu[k]] |= 1 << pv[k]
                adj[pv[k]] |= 1 << pu[k]
        if connected_only and not _is_connected(adj, n):
            continue
        codes[out] = code
        adjs[out, :] = adj
        out += 1
    return codes[:out], adjs[:out]


@njit(cache=True)
def residual_degrees(adj):
    """rd[S, v] = |N(v) & S| for every subset S."""
    n = adj.shape[0]
    size = 1 << n
    rd = np.zeros((size, n), dtype=np.int8)
    for s in range(size):
        for v in range(n):
            rd[s, v] = popcount(adj[v] & s)
    return rd


@njit(cache=True)
def degenerate_table(rd, kappa):
    """ok[k, S] is True iff S is kappa[k]-degenerate.

    Peeling is order independent, so S is degenerate iff its lowest-index
    peelable vertex v exists and S - v is degenerate.
    """
    size, n = rd.shape
    nk = kappa.shape[0]
    ok = np.zeros((nk, size), dtype=np.bool_)
    for k in range(nk):
        ok[k, 0] = True
        for s in range(1, size):
            for v in range(n):
                if (s >> v) & 1 and rd[s, v] <= kappa[k, v]:
                    ok[k, s] = ok[k, s ^ (1 << v)]
                    break
    return ok


@njit(cache=True)
def incentive_table(rd, kappa, weights):
    """Minimum weighted incentive cost of every subset, with the argmin last vertex.

    cost[k, S] = min over v in S of cost[k, S - v]
                 + weights[k, v] * max(0, |N(v) & S| - kappa[k, v]).
    Ties go to the lowest index.
    """
    size, n = rd.shape
    nk = kappa.shape[0]
    cost = np.zeros((nk, size), dtype=np.int64)
    last = np.full((nk, size), -1, dtype=np.int8)
    for k in range(nk):
        for s in range(1, size):
            best = np.iinfo(np.int64).max
            arg = -1
            for v in range(n):
                if (s >> v) & 1:
                    extra = rd[s, v] - kappa[k, v]
                    if extra < 0:
                        extra = 0
                    value = cost[k, s ^ (1 << v)] + weights[k, v] * extra
                    if value < best:
                        best = value
                        arg = v
            cost[k, s] = best
            last[k, s] = arg
    return cost, last


@njit(cache=True)
def subset_sums(weights):
    nk, n = weights.shape
    size = 1 << n
    out = np.zeros((nk, size), dtype=np.int64)
    for k in range(nk):
        for s in range(1, size):
            low = s & -s
            v = popcount(low - 1)
            out[k, s] = out[k, s ^ low] + weights[k, v]
    return out


@njit(cache=True)
def activation_table(adj, tau):
    """full[k, T] is True iff seed set T activates every vertex under tau[k]."""
    n = adj.shape[0]
    size = 1 << n
    everything = size - 1
    nk = tau.shape[0]
    full = np.zeros((nk, size), dtype=np.bool_)
    for k in range(nk):
        for t in range(size):
            active = t
            while True:
                grown = active
                for v in range(n):
                    if not (active >> v) & 1 and popcount(adj[v] & active) >= tau[k, v]:
                        grown |= 1 << v
                if grown == active:
                    break
                active = grown
            full[k, t] = active == everything
    return full


@njit(cache=True)
def back_degrees(n, eu, ev, perms):
    """Number of neighbours placed before each vertex, for each ordering row."""
    nperm = perms.shape[0]
    out = np.zeros((nperm, n), dtype=np.int32)
    pos = np.empty(n, dtype=np.int64)
    for p in range(nperm):
        for i in range(n):
            pos[perms[p, i]] = i
        for e in range(eu.shape[0]):
            a = eu[e]
            b = ev[e]
            if pos[a] < pos[b]:
                out[p, b] += 1
            else:
                out[p, a] += 1
    return out


@njit(cache=True)
def backdeg_histogram_table(perms):
    """H[u, M, l]: orderings in which exactly l members of M precede u.

    ``perms`` must hold every ordering of range(n) exactly once.
    """
    nperm, n = perms.shape
    size = 1 << n
    hist = np.zeros((n, size, n + 1), dtype=np.int64)
    pred = np.empty(n, dtype=np.int64)
    for p in range(nperm):
        before = 0
        for i in range(n):
            u = perms[p, i]
            pred[u] = before
            before |= 1 << u
        for u in range(n):
            for m in range(size):
                hist[u, m, popcount(pred[u] & m)] += 1
    return hist
