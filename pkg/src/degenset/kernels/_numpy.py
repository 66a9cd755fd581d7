"""Vectorised numpy versions of the bitmask kernels.

Subset tables are filled one popcount layer at a time so each layer only
reads values from the layer below.
"""

from functools import lru_cache

import numpy as np


def popcount(x):
    x = np.asarray(x, dtype=np.int64)
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += x & 1
        x = x >> 1
    return count


@lru_cache(maxsize=None)
def _layers(n):
    subsets = np.arange(1 << n, dtype=np.int64)
    sizes = popcount(subsets)
    return tuple(subsets[sizes == k] for k in range(1, n + 1))


@lru_cache(maxsize=None)
def _membership(n):
    subsets = np.arange(1 << n, dtype=np.int64)
    return ((subsets[:, None] >> np.arange(n)) & 1).astype(bool)


def graph_masks(n, start, stop, connected_only):
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    codes = np.arange(start, stop, dtype=np.int64)
    adjs = np.zeros((codes.size, n), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        bit = (codes >> k) & 1
        adjs[:, i] |= bit << j
        adjs[:, j] |= bit << i
    if connected_only and n > 0:
        seen = np.ones(codes.size, dtype=np.int64)
        for _ in range(n):
            grown = seen.copy()
            for v in range(n):
                grown |= np.where((seen >> v) & 1 == 1, adjs[:, v], 0)
            seen = grown
        keep = seen == (1 << n) - 1
        codes, adjs = codes[keep], adjs[keep]
    return codes, adjs


def residual_degrees(adj):
    adj = np.asarray(adj, dtype=np.int64)
    n = adj.shape[0]
    subsets = np.arange(1 << n, dtype=np.int64)
    return popcount(subsets[:, None] & adj[None, :]).astype(np.int8)


def degenerate_table(rd, kappa):
    size, n = rd.shape
    kappa = np.asarray(kappa, dtype=np.int64)
    inside = _membership(n)
    ok = np.zeros((kappa.shape[0], size), dtype=bool)
    ok[:, 0] = True
    for layer in _layers(n):
        eligible = inside[layer][None, :, :] & (rd[layer][None, :, :] <= kappa[:, None, :])
        found = eligible.any(axis=2)
        first = eligible.argmax(axis=2)
        parent = layer[None, :] ^ (np.int64(1) << first)
        ok[:, layer] = found & np.take_along_axis(ok, parent, axis=1)
    return ok


def incentive_table(rd, kappa, weights):
    size, n = rd.shape
    kappa = np.asarray(kappa, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.int64)
    inside = _membership(n)
    big = np.iinfo(np.int64).max
    cost = np.zeros((kappa.shape[0], size), dtype=np.int64)
    last = np.full((kappa.shape[0], size), -1, dtype=np.int8)
    bits = np.int64(1) << np.arange(n, dtype=np.int64)
    for layer in _layers(n):
        extra = np.maximum(rd[layer][None, :, :].astype(np.int64) - kappa[:, None, :], 0)
        parents = layer[:, None] ^ bits[None, :]
        parents = np.where(inside[layer], parents, 0)
        before = cost[:, parents]
        total = np.where(inside[layer][None, :, :], before + weights[:, None, :] * extra, big)
        arg = total.argmin(axis=2)
        cost[:, layer] = np.take_along_axis(total, arg[:, :, None], axis=2)[:, :, 0]
        last[:, layer] = arg
    return cost, last


def subset_sums(weights):
    weights = np.asarray(weights, dtype=np.int64)
    n = weights.shape[1]
    return weights @ _membership(n).T.astype(np.int64)


def activation_table(adj, tau):
    adj = np.asarray(adj, dtype=np.int64)
    tau = np.asarray(tau, dtype=np.int64)
    n = adj.shape[0]
    size = 1 << n
    active = np.broadcast_to(np.arange(size, dtype=np.int64), (tau.shape[0], size)).copy()
    # synchronous rounds; n rounds always reach the fixpoint
    for _ in range(n):
        grown = active.copy()
        for v in range(n):
            hits = popcount(active & adj[v]) >= tau[:, v:v + 1]
            grown |= np.where(hits, np.int64(1) << v, 0)
        if np.array_equal(grown, active):
            break
        active = grown
    return active == size - 1


def back_degrees(n, eu, ev, perms):
    perms = np.asarray(perms, dtype=np.int64)
    pos = np.empty_like(perms)
    rows = np.arange(perms.shape[0])[:, None]
    pos[rows, perms] = np.arange(n)[None, :]
    out = np.zeros((perms.shape[0], n), dtype=np.int32)
    for a, b in zip(np.asarray(eu), np.asarray(ev)):
        a_first = pos[:, a] < pos[:, b]
        out[:, b] += a_first
        out[:, a] += ~a_first
    return out


def backdeg_histogram_table(perms):
    perms = np.asarray(perms, dtype=np.int64)
    nperm, n = perms.shape
    size = 1 << n
    bits = np.int64(1) << perms
    # pred[p, u]: mask of vertices placed before u in ordering p
    before = np.cumsum(bits, axis=1) - bits
    pred = np.empty_like(before)
    pred[np.arange(nperm)[:, None], perms] = before
    masks = np.arange(size, dtype=np.int64)
    hist = np.zeros((n, size, n + 1), dtype=np.int64)
    for u in range(n):
        counts = popcount(pred[:, u, None] & masks[None, :])
        for m in range(size):
            hist[u, m] = np.bincount(counts[:, m], minlength=n + 1)
    return hist
