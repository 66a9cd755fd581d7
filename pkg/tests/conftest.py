import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from degenset.graph import Graph, validate_instance

P3 = Graph.path(3)
K2 = Graph.complete(2)
K3 = Graph.complete(3)
K4 = Graph.complete(4)
STAR3 = Graph.star(3)


def inst(g, c=None, kappa=None):
    if isinstance(kappa, int):
        kappa = [kappa] * g.n
    return validate_instance(g, c, kappa)


def random_graph(rng, n, p):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_instance(rng, n, p=0.5, max_num=9, max_den=4):
    g = random_graph(rng, n, p)
    c = [Fraction(rng.randint(1, max_num), rng.randint(1, max_den)) for _ in range(n)]
    kappa = [rng.randint(0, d) for d in g.degrees]
    return validate_instance(g, c, kappa)


@st.composite
def graphs(draw, min_n=0, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, b in zip(pairs, bits) if b])


@st.composite
def instances(draw, min_n=0, max_n=7):
    g = draw(graphs(min_n, max_n))
    c = [Fraction(draw(st.integers(1, 9)), draw(st.integers(1, 5))) for _ in range(g.n)]
    kappa = [draw(st.integers(0, d)) for d in g.degrees]
    return validate_instance(g, c, kappa)


@pytest.fixture
def rng():
    return random.Random(20240601)
