"""Exact alpha(G, c, kappa) and beta(G, c, kappa) by subset enumeration.

alpha scans every vertex subset for the heaviest degenerate one. beta uses
the subset program ``B(S) = min_v B(S - v) + c(v) max(0, |N(v) & S| - kappa(v))``
with ``v`` placed last: for a fixed ordering the cheapest incentives are
exactly the excess back-degrees, so beta is a minimum over orderings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .degeneracy import DegenWitness, check_degenerate
from .graph import Instance, check_vertex, scale_to_integers
from .greedy import IncentiveAssignment, InvariantViolation, reduce_initial, reduce_terminal

DEFAULT_CAP = 20
_INT64_SAFE = 2**62


class OracleCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    witness: DegenWitness | IncentiveAssignment


def _check_cap(inst: Instance, cap: int):
    if inst.n > cap:
        raise OracleCapExceeded(f"n={inst.n} exceeds the oracle cap of {cap}")


def _masks(inst: Instance) -> np.ndarray:
    return np.array(inst.graph.masks, dtype=np.int64)


def _subset_weights(weights: list[int]) -> np.ndarray:
    n = len(weights)
    if sum(weights) < _INT64_SAFE:
        return kernels.subset_sums(np.array([weights], dtype=np.int64))[0]
    out = np.zeros(1 << n, dtype=object)
    for s in range(1, 1 << n):
        low = s & -s
        out[s] = out[s ^ low] + weights[low.bit_length() - 1]
    return out


def exact_alpha(inst: Instance, cap: int = DEFAULT_CAP) -> OracleResult:
    """Maximum weight kappa-degenerate set; ties keep the smallest subset mask."""
    _check_cap(inst, cap)
    if inst.n == 0:
        return OracleResult(Fraction(0), DegenWitness(()))
    rd = kernels.residual_degrees(_masks(inst))
    ok = kernels.degenerate_table(rd, np.array([inst.kappa], dtype=np.int64))[0]
    weights, den = scale_to_integers(inst.c)
    totals = _subset_weights(weights)
    candidates = np.flatnonzero(ok)
    best = int(candidates[int(np.argmax(totals[candidates]))])
    witness = check_degenerate(inst, [u for u in range(inst.n) if (best >> u) & 1])
    if not isinstance(witness, DegenWitness):
        raise InvariantViolation(f"subset table and peeling disagree on mask {best}")
    return OracleResult(Fraction(int(totals[best]), den), witness)


def exact_beta(inst: Instance, cap: int = DEFAULT_CAP) -> OracleResult:
    """Cheapest incentives making V(G) degenerate, with an optimal ordering."""
    _check_cap(inst, cap)
    n = inst.n
    if n == 0:
        return OracleResult(Fraction(0), IncentiveAssignment((), (), Fraction(0)))
    weights, den = scale_to_integers(inst.c)
    d = inst.degrees
    if sum(w * dv for w, dv in zip(weights, d)) >= _INT64_SAFE:
        raise OracleCapExceeded("weights too large for the int64 incentive table")
    rd = kernels.residual_degrees(_masks(inst))
    cost, last = kernels.incentive_table(
        rd, np.array([inst.kappa], dtype=np.int64), np.array([weights], dtype=np.int64)
    )
    s = (1 << n) - 1
    iota = [0] * n
    tail = []
    while s:
        v = int(last[0, s])
        iota[v] = max(0, int(rd[s, v]) - inst.kappa[v])
        tail.append(v)
        s ^= 1 << v
    ordering = tuple(reversed(tail))
    value = Fraction(int(cost[0, (1 << n) - 1]), den)
    total = sum((inst.c[u] * iota[u] for u in range(n)), Fraction(0))
    if total != value:
        raise InvariantViolation(f"reconstructed cost {total} != table value {value}")
    return OracleResult(value, IncentiveAssignment(tuple(iota), ordering, value))


def is_initial(inst: Instance, u: int, cap: int = DEFAULT_CAP) -> bool:
    """Whether some maximum-weight witness can start at ``u``."""
    check_vertex(inst.graph, u)
    reduced = reduce_initial(inst, u).instance
    return exact_alpha(inst, cap).value == inst.c[u] + exact_alpha(reduced, cap).value


def is_terminal(inst: Instance, u: int, cap: int = DEFAULT_CAP) -> bool:
    """Whether some optimal incentive ordering can end at ``u`` paying ``d(u) - kappa(u)``."""
    check_vertex(inst.graph, u)
    reduced = reduce_terminal(inst, u).instance
    charge = inst.c[u] * (inst.degrees[u] - inst.kappa[u])
    return exact_beta(inst, cap).value == charge + exact_beta(reduced, cap).value
