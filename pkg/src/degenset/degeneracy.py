"""Degeneracy certificates, threshold activation, and the duality between them.

A set is kappa-degenerate in G exactly when its complement is a dynamic
monopoly for the threshold ``tau = d - kappa``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph, Instance, InstanceError, check_vertex


@dataclass(frozen=True)
class DegenWitness:
    """Ordering ``vertices`` in which each vertex has at most kappa earlier neighbours."""

    vertices: tuple[int, ...]

    def __bool__(self):
        # a certificate, so truthy even for the empty set
        return True

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.vertices)


@dataclass(frozen=True)
class NotDegenerate:
    """Peeling got stuck: no vertex of ``stuck`` has at most kappa neighbours inside it."""

    stuck: frozenset[int]

    def __bool__(self):
        return False


@dataclass(frozen=True)
class ThresholdProfile:
    tau: tuple[int, ...]

    def __getitem__(self, u):
        return self.tau[u]

    def __len__(self):
        return len(self.tau)


def _vertex_set(g: Graph, vertices: Iterable[int]) -> set[int]:
    return {check_vertex(g, u) for u in vertices}


def witness_violations(inst: Instance, order: Sequence[int], kappa: Sequence[int] | None = None):
    """Positions where ``order`` fails to certify degeneracy (empty list means valid)."""
    kappa = inst.kappa if kappa is None else kappa
    adjacency = inst.graph.adjacency
    placed: set[int] = set()
    bad = []
    for i, u in enumerate(order):
        if u in placed or not 0 <= u < inst.n:
            bad.append(i)
            continue
        if sum(1 for v in adjacency[u] if v in placed) > kappa[u]:
            bad.append(i)
        placed.add(u)
    return bad


def is_valid_witness(inst: Instance, order: Sequence[int], kappa: Sequence[int] | None = None) -> bool:
    return not witness_violations(inst, order, kappa)


def check_degenerate(inst: Instance, vertices: Iterable[int]) -> DegenWitness | NotDegenerate:
    """Peel ``vertices`` lowest index first; reversed peel order is the witness."""
    g = inst.graph
    residual = _vertex_set(g, vertices)
    inner = {u: sum(1 for v in g.adjacency[u] if v in residual) for u in residual}
    heap = [u for u in residual if inner[u] <= inst.kappa[u]]
    heapq.heapify(heap)
    peeled = []
    while heap:
        u = heapq.heappop(heap)
        if u not in residual:
            continue
        residual.remove(u)
        peeled.append(u)
        for v in g.adjacency[u]:
            if v in residual:
                inner[v] -= 1
                if inner[v] == inst.kappa[v]:
                    heapq.heappush(heap, v)
    if residual:
        return NotDegenerate(frozenset(residual))
    return DegenWitness(tuple(reversed(peeled)))


def is_degenerate(inst: Instance, vertices: Iterable[int]) -> bool:
    return isinstance(check_degenerate(inst, vertices), DegenWitness)


def dual_threshold(inst: Instance) -> ThresholdProfile:
    return ThresholdProfile(tuple(d - k for d, k in zip(inst.degrees, inst.kappa)))


def simulate_activation(g: Graph, tau, seeds: Iterable[int]) -> tuple[frozenset[int], int]:
    """Run synchronous threshold rounds from ``seeds`` to the fixpoint.

    Returns the final active set and the number of rounds that activated
    at least one vertex.
    """
    tau = tuple(tau)
    if len(tau) != g.n:
        raise InstanceError(f"threshold profile has length {len(tau)}, expected {g.n}")
    active = _vertex_set(g, seeds)
    hits = [0] * g.n
    for u in active:
        for v in g.adjacency[u]:
            hits[v] += 1
    frontier = [u for u in range(g.n) if u not in active and hits[u] >= tau[u]]
    rounds = 0
    while frontier:
        rounds += 1
        active.update(frontier)
        candidates = set()
        for u in frontier:
            for v in g.adjacency[u]:
                hits[v] += 1
                if v not in active:
                    candidates.add(v)
        frontier = sorted(v for v in candidates if hits[v] >= tau[v])
    return frozenset(active), rounds


def is_dynamic_monopoly(g: Graph, tau, seeds: Iterable[int]) -> bool:
    final, _ = simulate_activation(g, tau, seeds)
    return len(final) == g.n
