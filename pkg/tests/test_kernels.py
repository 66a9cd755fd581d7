import itertools
import subprocess
import sys

import numpy as np
import pytest

from degenset import kernels
from degenset.degeneracy import is_degenerate, is_dynamic_monopoly
from degenset.graph import Graph, components, graph6_code
from degenset.greedy import incentives_from_order

from conftest import inst

NB = kernels.backend_module("numba")
NP = kernels.backend_module("numpy")


def _random_case(rng, n, nk=5):
    g = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5])
    adj = np.array(g.masks, dtype=np.int64)
    kappa = np.array([[rng.integers(0, d + 1) for d in g.degrees] for _ in range(nk)], dtype=np.int64)
    weights = rng.integers(1, 50, size=(nk, n)).astype(np.int64)
    return g, adj, kappa, weights


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def test_backend_selection():
    assert kernels.BACKEND in ("numba", "numpy")
    for name in kernels.KERNELS:
        assert callable(getattr(NB, name)) and callable(getattr(NP, name))
    with pytest.raises(ValueError):
        kernels.backend_module("fortran")


def test_env_flag_selects_numpy():
    code = "from degenset import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"DEGENSET_BACKEND": "numpy", "PATH": ""}, check=True)
    assert out.stdout.strip() == "numpy"


@pytest.mark.parametrize("n", [1, 3, 5, 6])
@pytest.mark.parametrize("connected_only", [False, True])
def test_graph_masks_agree(n, connected_only):
    total = 1 << (n * (n - 1) // 2)
    a = NB.graph_masks(n, 0, total, connected_only)
    b = NP.graph_masks(n, 0, total, connected_only)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    for code, masks in zip(a[0][:200], a[1][:200]):
        g = Graph.from_masks(masks)
        assert graph6_code(g) == code
        if connected_only:
            assert len(components(g)) == 1


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_subset_kernels_agree(rng, n):
    for _ in range(4):
        g, adj, kappa, weights = _random_case(rng, n)
        rd = NB.residual_degrees(adj)
        assert np.array_equal(rd, NP.residual_degrees(adj))
        ok = NB.degenerate_table(rd, kappa)
        assert np.array_equal(ok, NP.degenerate_table(rd, kappa))
        cost_a, last_a = NB.incentive_table(rd, kappa, weights)
        cost_b, last_b = NP.incentive_table(rd, kappa, weights)
        assert np.array_equal(cost_a, cost_b) and np.array_equal(last_a, last_b)
        assert np.array_equal(NB.subset_sums(weights), NP.subset_sums(weights))
        tau = np.array(g.degrees, dtype=np.int64)[None, :] - kappa
        full = NB.activation_table(adj, tau)
        assert np.array_equal(full, NP.activation_table(adj, tau))


def test_subset_kernels_match_python(rng):
    for _ in range(5):
        g, adj, kappa, weights = _random_case(rng, 5, nk=2)
        rd = kernels.residual_degrees(adj)
        ok = kernels.degenerate_table(rd, kappa)
        cost, _ = kernels.incentive_table(rd, kappa, weights)
        tau = np.array(g.degrees, dtype=np.int64)[None, :] - kappa
        full = kernels.activation_table(adj, tau)
        for k in range(2):
            i = inst(g, list(weights[k]), list(kappa[k]))
            for mask in range(32):
                s = [u for u in range(5) if mask >> u & 1]
                assert ok[k, mask] == is_degenerate(i, s)
                assert full[k, mask] == is_dynamic_monopoly(g, tau[k], s)
            best = min(incentives_from_order(i, p).cost for p in itertools.permutations(range(5)))
            assert cost[k, 31] == best


def test_ordering_kernels_agree(rng):
    n = 5
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    g, *_ = _random_case(rng, n)
    eu = np.array([a for a, _ in g.edges()], dtype=np.int64)
    ev = np.array([b for _, b in g.edges()], dtype=np.int64)
    back = NB.back_degrees(n, eu, ev, perms)
    assert np.array_equal(back, NP.back_degrees(n, eu, ev, perms))
    hist = NB.backdeg_histogram_table(perms)
    assert np.array_equal(hist, NP.backdeg_histogram_table(perms))
    # the histogram of the edge mask of u reproduces the back-degree counts
    for u in range(n):
        counts = np.bincount(back[:, u], minlength=n + 1)
        assert np.array_equal(hist[u, g.masks[u]], counts)
