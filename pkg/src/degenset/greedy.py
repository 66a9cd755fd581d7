"""Constructions that attain the bounds.

Two families live here. The ordering-based ones (``select_degenerate_from_order``,
``incentives_from_order``) turn any vertex ordering into a witness; averaged
over all orderings they hit the bounds exactly. The deterministic greedies
repeatedly pick a pivot with non-negative slack and recurse on a reduced
instance, which gives the same guarantee without randomness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from . import kernels
from .bounds import alpha_term, beta_term
from .degeneracy import DegenWitness, witness_violations
from .graph import Instance, InstanceError, check_vertex, scale_to_integers

ALPHA_SET = "alpha-set"
INCENTIVES = "incentives"
MAX_ENUMERATION_N = 8


class InvariantViolation(RuntimeError):
    """An internal identity failed; indicates an arithmetic bug, never bad input."""


@dataclass(frozen=True)
class IncentiveAssignment:
    iota: tuple[int, ...]
    ordering: tuple[int, ...]
    cost: Fraction


@dataclass(frozen=True)
class ReducedInstance:
    """Result of removing a pivot; ``index_map[i]`` is the parent index of reduced vertex ``i``."""

    instance: Instance
    pivot: int
    removed: frozenset[int]
    index_map: tuple[int, ...]


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    exact_mean: Fraction
    best: Fraction
    witness: DegenWitness | IncentiveAssignment
    samples: int
    seed: int


def _check_which(which: str) -> str:
    if which not in (ALPHA_SET, INCENTIVES):
        raise ValueError(f"which must be {ALPHA_SET!r} or {INCENTIVES!r}, got {which!r}")
    return which


def _check_permutation(inst: Instance, order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(int(u) for u in order)
    if sorted(order) != list(range(inst.n)):
        raise InstanceError(f"not a permutation of 0..{inst.n - 1}: {order}")
    return order


def _back_degrees(inst: Instance, order: Sequence[int]) -> list[int]:
    placed = set()
    back = [0] * inst.n
    for u in order:
        back[u] = sum(1 for v in inst.graph.adjacency[u] if v in placed)
        placed.add(u)
    return back


def select_degenerate_from_order(inst: Instance, order: Sequence[int]) -> DegenWitness:
    """Keep every vertex with at most kappa neighbours anywhere earlier in ``order``."""
    order = _check_permutation(inst, order)
    back = _back_degrees(inst, order)
    return DegenWitness(tuple(u for u in order if back[u] <= inst.kappa[u]))


def incentives_from_order(inst: Instance, order: Sequence[int]) -> IncentiveAssignment:
    order = _check_permutation(inst, order)
    back = _back_degrees(inst, order)
    iota = tuple(max(0, back[u] - inst.kappa[u]) for u in range(inst.n))
    cost = sum((inst.c[u] * iota[u] for u in range(inst.n)), Fraction(0))
    return IncentiveAssignment(iota, order, cost)


def incentive_violations(inst: Instance, assignment: IncentiveAssignment) -> list[int]:
    """Positions where the ordering fails to certify (kappa + iota)-degeneracy of V."""
    if any(i < 0 for i in assignment.iota) or sorted(assignment.ordering) != list(range(inst.n)):
        return [-1]
    raised = [k + i for k, i in zip(inst.kappa, assignment.iota)]
    return witness_violations(inst, assignment.ordering, raised)


def _edge_arrays(inst: Instance):
    edges = inst.graph.edges()
    eu = np.array([a for a, _ in edges], dtype=np.int64)
    ev = np.array([b for _, b in edges], dtype=np.int64)
    return eu, ev


def _per_order_values(inst: Instance, which: str, back: np.ndarray) -> np.ndarray:
    """Integer objective per ordering row, scaled by the weight denominator."""
    weights, _ = scale_to_integers(inst.c)
    w = np.array(weights, dtype=object if max(weights, default=0) > 2**40 else np.int64)
    kappa = np.array(inst.kappa, dtype=np.int64)
    if which == ALPHA_SET:
        per_vertex = (back <= kappa[None, :]).astype(np.int64)
    else:
        per_vertex = np.maximum(back - kappa[None, :], 0).astype(np.int64)
    return per_vertex @ w


def expectation_by_enumeration(inst: Instance, which: str) -> Fraction:
    """Exact average of the per-ordering objective over all n! orderings."""
    _check_which(which)
    n = inst.n
    if n > MAX_ENUMERATION_N:
        raise ValueError(f"n={n} too large for n! enumeration (max {MAX_ENUMERATION_N})")
    if n == 0:
        return Fraction(0)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    eu, ev = _edge_arrays(inst)
    back = kernels.back_degrees(n, eu, ev, perms)
    _, den = scale_to_integers(inst.c)
    total = sum(int(x) for x in _per_order_values(inst, which, back))
    return Fraction(total, factorial(n) * den)


def monte_carlo_estimate(inst: Instance, which: str, samples: int, seed: int = 0,
                         chunk: int = 8192) -> MonteCarloResult:
    """Sample uniform orderings from numpy's PCG64 stream seeded with ``seed``.

    The best sample is the largest selected weight (alpha-set) or the
    cheapest incentive cost; ties keep the earliest sample.
    """
    _check_which(which)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = inst.n
    rng = np.random.Generator(np.random.PCG64(seed))
    eu, ev = _edge_arrays(inst)
    _, den = scale_to_integers(inst.c)
    total = 0
    best_value = None
    best_order = tuple(range(n))
    done = 0
    while done < samples:
        rows = min(chunk, samples - done)
        perms = rng.permuted(np.tile(np.arange(n, dtype=np.int64), (rows, 1)), axis=1)
        back = kernels.back_degrees(n, eu, ev, perms)
        values = _per_order_values(inst, which, back)
        total += sum(int(x) for x in values)
        pick = int(np.argmax(values) if which == ALPHA_SET else np.argmin(values)) if n else 0
        value = int(values[pick]) if n else 0
        if best_value is None or (value > best_value if which == ALPHA_SET else value < best_value):
            best_value = value
            best_order = tuple(int(u) for u in perms[pick]) if n else ()
        done += rows
    exact_mean = Fraction(total, samples * den)
    if which == ALPHA_SET:
        witness = select_degenerate_from_order(inst, best_order)
    else:
        witness = incentives_from_order(inst, best_order)
    return MonteCarloResult(float(exact_mean), exact_mean, Fraction(best_value, den),
                            witness, samples, seed)


# -- reductions ---------------------------------------------------------------

def reduce_initial(inst: Instance, pivot: int) -> ReducedInstance:
    """Put ``pivot`` first: drop it and its kappa-0 neighbours, charge one capacity to the rest."""
    check_vertex(inst.graph, pivot)
    nbrs = set(inst.graph.adjacency[pivot])
    removed = frozenset(v for v in nbrs if inst.kappa[v] == 0)
    keep = tuple(v for v in range(inst.n) if v != pivot and v not in removed)
    graph = inst.graph.induced(keep)
    # edges into the removed set can push kappa above the new degree; capping
    # at the degree leaves the family of degenerate sets unchanged
    kappa = tuple(
        min(inst.kappa[v] - (v in nbrs), graph.degrees[i]) for i, v in enumerate(keep)
    )
    reduced = Instance(graph, tuple(inst.c[v] for v in keep), kappa)
    return ReducedInstance(reduced, pivot, removed, keep)


def reduce_terminal(inst: Instance, pivot: int) -> ReducedInstance:
    """Put ``pivot`` last: delete it, and lower kappa on neighbours that had kappa = d."""
    check_vertex(inst.graph, pivot)
    d = inst.degrees
    removed = frozenset(v for v in inst.graph.adjacency[pivot] if inst.kappa[v] == d[v])
    keep = tuple(v for v in range(inst.n) if v != pivot)
    kappa = [inst.kappa[v] - 1 if v in removed else inst.kappa[v] for v in keep]
    return ReducedInstance(inst.restrict(keep, kappa), pivot, removed, keep)


def claim1_slacks(inst: Instance) -> list[Fraction]:
    """``c(u) - claim1_rhs(u)`` for every vertex, in one pass."""
    d, c, k = inst.degrees, inst.c, inst.kappa
    own = [alpha_term(c[v], d[v], k[v]) for v in range(inst.n)]
    shift = [own[v] - c[v] * k[v] / d[v] if d[v] else Fraction(0) for v in range(inst.n)]
    return [
        c[u] - own[u] - sum((shift[v] for v in inst.graph.adjacency[u]), Fraction(0))
        for u in range(inst.n)
    ]


def claim1b_slacks(inst: Instance) -> list[Fraction]:
    """``c(u)(d(u) - kappa(u)) - claim1b_rhs(u)`` for every vertex."""
    d, c, k = inst.degrees, inst.c, inst.kappa
    own = [beta_term(c[v], d[v], k[v]) for v in range(inst.n)]
    shift = []
    for v in range(inst.n):
        t = d[v] - k[v]
        shift.append(own[v] - c[v] * (t - 1) * t / (2 * d[v]) if d[v] else Fraction(0))
    return [
        c[u] * (d[u] - k[u]) - own[u] - sum((shift[v] for v in inst.graph.adjacency[u]), Fraction(0))
        for u in range(inst.n)
    ]


def greedy_degenerate_set(inst: Instance) -> DegenWitness:
    """Deterministic set with weight at least ``bound_alpha(inst)``.

    Each round takes the vertex of largest slack ``c(u) - claim1_rhs(u)``
    (lowest index on ties) as the next vertex of the witness and recurses
    on ``reduce_initial``.
    """
    current = inst
    labels = tuple(range(inst.n))
    chosen = []
    while current.n:
        slacks = claim1_slacks(current)
        pivot = max(range(current.n), key=lambda u: (slacks[u], -u))
        if slacks[pivot] < 0:
            raise InvariantViolation(f"no vertex with non-negative slack (max {slacks[pivot]})")
        chosen.append(labels[pivot])
        reduced = reduce_initial(current, pivot)
        labels = tuple(labels[i] for i in reduced.index_map)
        current = reduced.instance
    return DegenWitness(tuple(chosen))


def greedy_incentives(inst: Instance) -> IncentiveAssignment:
    """Deterministic incentive assignment costing at most ``bound_beta(inst)``.

    Each round takes the vertex minimising ``c(u)(d(u)-kappa(u)) - claim1b_rhs(u)``
    as the last remaining vertex of the ordering and recurses on
    ``reduce_terminal``. Incentives are charged against the original kappa.
    """
    current = inst
    labels = tuple(range(inst.n))
    iota = [0] * inst.n
    picked = []
    while current.n:
        slacks = claim1b_slacks(current)
        pivot = min(range(current.n), key=lambda u: (slacks[u], u))
        if slacks[pivot] > 0:
            raise InvariantViolation(f"no vertex with non-positive slack (min {slacks[pivot]})")
        original = labels[pivot]
        iota[original] = max(0, current.degrees[pivot] - inst.kappa[original])
        picked.append(original)
        reduced = reduce_terminal(current, pivot)
        labels = tuple(labels[i] for i in reduced.index_map)
        current = reduced.instance
    cost = sum((inst.c[u] * iota[u] for u in range(inst.n)), Fraction(0))
    return IncentiveAssignment(tuple(iota), tuple(reversed(picked)), cost)
