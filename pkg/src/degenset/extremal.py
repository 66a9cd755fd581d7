"""Tightness characterisations for the two bounds, and census runs over graph corpora.

Both bounds and both optima add up over connected components, so the
predicates are evaluated per component and conjoined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bounds import bound_alpha, bound_beta
from .graph import (
    Instance,
    components,
    encode_graph6,
    format_edge_list,
    format_profile_file,
    format_rational,
)
from .oracle import DEFAULT_CAP, exact_alpha, exact_beta

CASE_NONE = "none"


@dataclass(frozen=True)
class PredicateResult:
    holds: bool
    cases: tuple[str, ...]

    def __bool__(self):
        return self.holds


def _constant(values) -> bool:
    values = list(values)
    return all(v == values[0] for v in values)


def _component_case_t1(inst: Instance, block: Sequence[int]) -> str:
    d, c, k = inst.degrees, inst.c, inst.kappa
    if all(k[u] == d[u] for u in block):
        return "i"
    clique = all(d[u] == len(block) - 1 for u in block)
    if clique and _constant(c[u] for u in block) and _constant(k[u] for u in block):
        return "ii"
    return CASE_NONE


def _component_case_t2(inst: Instance, block: Sequence[int]) -> str:
    d, c, k = inst.degrees, inst.c, inst.kappa
    if all(k[u] == d[u] for u in block):
        return "i"
    if _constant(c[u] for u in block) and all(k[u] == 0 for u in block):
        return "ii"
    clique = all(d[u] == len(block) - 1 for u in block)
    if clique and _constant(c[u] for u in block) and _constant(k[u] for u in block):
        if 0 < k[block[0]] < len(block) - 1:
            return "iii"
    return CASE_NONE


def theorem1_predicate(inst: Instance) -> PredicateResult:
    """Every component has kappa = d, or is a clique with constant c and kappa."""
    cases = tuple(_component_case_t1(inst, b) for b in components(inst.graph))
    return PredicateResult(CASE_NONE not in cases, cases)


def theorem2_predicate(inst: Instance) -> PredicateResult:
    """Every component has kappa = d; or constant c with kappa = 0; or is a
    clique with constant c and kappa strictly between 0 and its degree."""
    cases = tuple(_component_case_t2(inst, b) for b in components(inst.graph))
    return PredicateResult(CASE_NONE not in cases, cases)


@dataclass(frozen=True)
class ExtremalReport:
    alpha_bound: Fraction
    alpha_exact: Fraction
    beta_bound: Fraction
    beta_exact: Fraction
    alpha_equality: bool
    beta_equality: bool
    t1_predicate: bool
    t2_predicate: bool
    t1_agrees: bool
    t2_agrees: bool
    t1_cases: tuple[str, ...]
    t2_cases: tuple[str, ...]

    def to_dict(self) -> dict:
        out = {}
        for name in ("alpha_bound", "alpha_exact", "beta_bound", "beta_exact"):
            out[name] = format_rational(getattr(self, name))
        for name in ("alpha_equality", "beta_equality", "t1_predicate", "t2_predicate",
                     "t1_agrees", "t2_agrees"):
            out[name] = getattr(self, name)
        out["t1_cases"] = list(self.t1_cases)
        out["t2_cases"] = list(self.t2_cases)
        return out


def verify_instance(inst: Instance, cap: int = DEFAULT_CAP) -> ExtremalReport:
    fa, fb = bound_alpha(inst).total, bound_beta(inst).total
    a, b = exact_alpha(inst, cap).value, exact_beta(inst, cap).value
    t1, t2 = theorem1_predicate(inst), theorem2_predicate(inst)
    return ExtremalReport(
        alpha_bound=fa, alpha_exact=a, beta_bound=fb, beta_exact=b,
        alpha_equality=a == fa, beta_equality=b == fb,
        t1_predicate=t1.holds, t2_predicate=t2.holds,
        t1_agrees=(a == fa) == t1.holds, t2_agrees=(b == fb) == t2.holds,
        t1_cases=t1.cases, t2_cases=t2.cases,
    )


# -- census -------------------------------------------------------------------

THEOREMS = ("alpha", "beta")


@dataclass(frozen=True)
class CensusConfig:
    """What to sweep.

    ``c_profiles`` entries: ``const:<v>``, ``bump`` for (1, ..., 1, 2),
    ``ramp`` for (1, 2, ..., n), or ``list:<v0>,<v1>,...`` by vertex index.
    ``kappa_mode`` is ``all`` (every profile with 0 <= kappa <= d) or
    ``constant`` (kappa = k0 for every feasible k0).
    """

    n_values: tuple[int, ...] = ()
    source: str = "labeled"
    graph6_lines: tuple[str, ...] = ()
    kappa_mode: str = "all"
    c_profiles: tuple[str, ...] = ("const:1",)
    connected_only: bool = True
    theorems: tuple[str, ...] = THEOREMS
    check_claims: bool = True
    engine: str = "auto"
    cap: int = DEFAULT_CAP
    jobs: int = 1


@dataclass
class Disagreement:
    theorem: str
    graph6: str
    edge_list: str
    profile: str
    bound: str
    exact: str
    equality: bool
    predicate: bool
    cases: tuple[str, ...]

    def sort_key(self):
        return (self.theorem, len(self.graph6), self.graph6, self.profile)

    def to_dict(self) -> dict:
        return dict(self.__dict__, cases=list(self.cases))


@dataclass
class ClaimViolation:
    claim: str
    graph6: str
    profile: str

    def sort_key(self):
        return (self.claim, len(self.graph6), self.graph6, self.profile)


@dataclass
class CensusSummary:
    instances: dict[int, int] = field(default_factory=dict)
    graphs: dict[int, int] = field(default_factory=dict)
    # (theorem, n, case label) -> number of tight instances
    extremal: dict[tuple[str, int, str], int] = field(default_factory=dict)
    # extremal instances re-checked for the structural claims, per theorem
    claims_checked: dict[str, int] = field(default_factory=dict)
    disagreements: list[Disagreement] = field(default_factory=list)
    claim_violations: list[ClaimViolation] = field(default_factory=list)
    malformed: list[str] = field(default_factory=list)

    def merge(self, other: CensusSummary) -> CensusSummary:
        for mine, theirs in ((self.instances, other.instances), (self.graphs, other.graphs),
                             (self.extremal, other.extremal),
                             (self.claims_checked, other.claims_checked)):
            for key, value in theirs.items():
                mine[key] = mine.get(key, 0) + value
        self.disagreements.extend(other.disagreements)
        self.claim_violations.extend(other.claim_violations)
        self.malformed.extend(other.malformed)
        return self

    def finalize(self) -> CensusSummary:
        self.disagreements.sort(key=Disagreement.sort_key)
        self.claim_violations.sort(key=ClaimViolation.sort_key)
        return self

    def to_text(self) -> str:
        lines = []
        for n in sorted(self.instances):
            lines.append(f"n={n} graphs={self.graphs.get(n, 0)} instances={self.instances[n]}")
            for (theorem, m, case), count in sorted(self.extremal.items()):
                if m == n:
                    lines.append(f"n={n} {theorem} case={case} extremal={count}")
        if self.malformed:
            lines.append(f"malformed: {len(self.malformed)}")
        lines.append(f"claim-violations: {len(self.claim_violations)}")
        lines.append(f"disagreements: {len(self.disagreements)}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "instances": {str(n): v for n, v in sorted(self.instances.items())},
            "graphs": {str(n): v for n, v in sorted(self.graphs.items())},
            "extremal": [
                {"theorem": t, "n": n, "case": case, "count": count}
                for (t, n, case), count in sorted(self.extremal.items())
            ],
            "claims_checked": dict(sorted(self.claims_checked.items())),
            "claim_violations": [v.__dict__ for v in self.claim_violations],
            "malformed": list(self.malformed),
            "disagreements": [d.to_dict() for d in self.disagreements],
        }


def make_disagreement(theorem: str, inst: Instance, cap: int = DEFAULT_CAP) -> Disagreement:
    """Recompute one instance with the Fraction oracles and package it for replay."""
    report = verify_instance(inst, cap)
    alpha = theorem == "alpha"
    return Disagreement(
        theorem=theorem,
        graph6=encode_graph6(inst.graph),
        edge_list=format_edge_list(inst.graph),
        profile=format_profile_file(inst),
        bound=format_rational(report.alpha_bound if alpha else report.beta_bound),
        exact=format_rational(report.alpha_exact if alpha else report.beta_exact),
        equality=report.alpha_equality if alpha else report.beta_equality,
        predicate=report.t1_predicate if alpha else report.t2_predicate,
        cases=report.t1_cases if alpha else report.t2_cases,
    )


def enumerate_and_verify(config: CensusConfig) -> CensusSummary:
    """Run every (graph, c, kappa) combination named by ``config``.

    The kernel engine decides tightness with scaled integer arithmetic over
    whole kappa sweeps at once; the reference engine calls
    :func:`verify_instance` per instance. ``auto`` uses the kernel engine.
    """
    from . import census

    return census.run(config)
