"""Exact closed-form bounds and the per-vertex quantities behind their tightness.

``bound_alpha`` is the weighted lower bound on the maximum weight of a
kappa-degenerate set; ``bound_beta`` is the weighted upper bound on the
cheapest incentive assignment. The claim/potential helpers are the vertex
level expressions that the greedy pivots and the extremal checks use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Instance, check_vertex


class UndefinedPotential(ValueError):
    """Potentials divide by the degree and are undefined on isolated vertices."""


@dataclass(frozen=True)
class BoundReport:
    total: Fraction
    per_vertex: tuple[Fraction, ...]


def alpha_term(c: Fraction, d: int, k: int) -> Fraction:
    return c * (k + 1) / (d + 1)


def beta_term(c: Fraction, d: int, k: int) -> Fraction:
    t = d - k
    return c * t * (t + 1) / (2 * (d + 1))


def bound_alpha(inst: Instance) -> BoundReport:
    terms = tuple(alpha_term(c, d, k) for c, d, k in zip(inst.c, inst.degrees, inst.kappa))
    return BoundReport(sum(terms, Fraction(0)), terms)


def bound_beta(inst: Instance) -> BoundReport:
    terms = tuple(beta_term(c, d, k) for c, d, k in zip(inst.c, inst.degrees, inst.kappa))
    return BoundReport(sum(terms, Fraction(0)), terms)


def claim1_rhs(inst: Instance, u: int) -> Fraction:
    """Change in the alpha bound charged to ``u`` when ``u`` starts the ordering.

    Equals ``c(u)`` for every vertex of a tight instance; the values minus
    ``c`` always sum to zero over the vertex set.
    """
    check_vertex(inst.graph, u)
    d, c, k = inst.degrees, inst.c, inst.kappa
    value = alpha_term(c[u], d[u], k[u])
    for v in inst.graph.adjacency[u]:
        value += alpha_term(c[v], d[v], k[v]) - c[v] * k[v] / d[v]
    return value


def claim1b_rhs(inst: Instance, u: int) -> Fraction:
    """Incentive-side analogue of :func:`claim1_rhs`; compare against ``c(u)(d(u)-kappa(u))``."""
    check_vertex(inst.graph, u)
    d, c, k = inst.degrees, inst.c, inst.kappa
    value = beta_term(c[u], d[u], k[u])
    for v in inst.graph.adjacency[u]:
        t = d[v] - k[v]
        value += beta_term(c[v], d[v], k[v]) - c[v] * (t - 1) * t / (2 * d[v])
    return value


def _degree(inst: Instance, u: int) -> int:
    check_vertex(inst.graph, u)
    d = inst.degrees[u]
    if d == 0:
        raise UndefinedPotential(f"potential undefined at isolated vertex {u}")
    return d


def potential_h1(inst: Instance, u: int) -> Fraction:
    d = _degree(inst, u)
    return inst.c[u] * (d - inst.kappa[u]) / (d * (d + 1))


def potential_h2(inst: Instance, u: int) -> Fraction:
    d = _degree(inst, u)
    k = inst.kappa[u]
    return inst.c[u] * (d - k) * (d + k + 1) / (2 * d * (d + 1))

