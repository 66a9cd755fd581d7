import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from degenset import census
from degenset.bounds import bound_alpha, bound_beta
from degenset.extremal import (
    CensusConfig,
    CensusSummary,
    enumerate_and_verify,
    theorem1_predicate,
    theorem2_predicate,
    verify_instance,
)
from degenset.graph import Graph, encode_graph6, parse_edge_list, parse_profile_file, validate_instance
from degenset.greedy import ALPHA_SET, INCENTIVES, expectation_by_enumeration
from degenset.oracle import exact_alpha, exact_beta

from conftest import K2, K3, K4, P3, inst

F = Fraction


def test_theorem1_predicate_examples():
    r = theorem1_predicate(inst(K3))
    assert r and r.cases == ("ii",)
    assert not theorem1_predicate(inst(P3))
    assert not theorem1_predicate(inst(K3, [1, 1, 2]))
    assert exact_alpha(inst(K3, [1, 1, 2])).value == 2 != bound_alpha(inst(K3, [1, 1, 2])).total
    full = inst(P3, kappa=list(P3.degrees))
    assert theorem1_predicate(full).cases == ("i",)


def test_theorem2_predicate_examples():
    r = theorem2_predicate(inst(P3))
    assert r and r.cases == ("ii",)
    r = theorem2_predicate(inst(K4, kappa=1))
    assert r and r.cases == ("iii",)
    assert not theorem2_predicate(inst(P3, [1, 2, 1]))
    assert exact_beta(inst(P3, [1, 2, 1])).value == 2 < bound_beta(inst(P3, [1, 2, 1])).total == 3
    # 0 < kappa < d on a clique, including kappa = d - 1
    assert theorem2_predicate(inst(K4, kappa=2)).cases == ("iii",)
    assert exact_beta(inst(K4, kappa=2)).value == 1 == bound_beta(inst(K4, kappa=2)).total


def test_predicates_per_component():
    g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (3, 4)])
    i = inst(g, kappa=[0, 0, 0, 1, 1])
    r = theorem1_predicate(i)
    assert r and r.cases == ("ii", "i")
    i = inst(g, [1, 1, 1, 1, 2], [0, 0, 0, 0, 0])
    assert theorem1_predicate(i).cases == ("ii", "none")
    assert theorem2_predicate(i).cases == ("ii", "none") and not theorem2_predicate(i)
    i = inst(g, [2, 2, 2, 1, 1], [0, 0, 0, 0, 0])
    assert theorem2_predicate(i).cases == ("ii", "ii")
    assert theorem1_predicate(inst(Graph.empty(0))).holds


def test_verify_instance_examples():
    r = verify_instance(inst(K3))
    assert r.alpha_equality and r.t1_agrees and r.beta_equality and r.t2_agrees
    assert r.t2_cases == ("ii",)
    r = verify_instance(inst(P3))
    assert not r.alpha_equality and r.beta_equality and r.t1_agrees and r.t2_agrees
    r = verify_instance(inst(P3, kappa=[0, 1, 0]))
    assert r.beta_exact == 1 and r.beta_bound == F(4, 3)
    assert not r.beta_equality and not r.t2_predicate and r.t2_agrees
    d = r.to_dict()
    assert d["beta_bound"] == "4/3" and list(d)[:2] == ["alpha_bound", "alpha_exact"]


def test_census_n2():
    s = enumerate_and_verify(CensusConfig(n_values=(2,), kappa_mode="constant"))
    assert s.instances == {2: 2} and s.graphs == {2: 1} and not s.disagreements
    s = enumerate_and_verify(CensusConfig(n_values=(2,), kappa_mode="all"))
    assert s.instances == {2: 4} and not s.disagreements and not s.claim_violations


def test_census_n3():
    s = enumerate_and_verify(CensusConfig(n_values=(3,)))
    assert s.graphs == {3: 4} and not s.disagreements and not s.claim_violations
    # P3 has 2*3*2 kappa profiles (three labelings), K3 has 27
    assert s.instances == {3: 3 * 12 + 27}


def test_census_empty_corpus():
    s = enumerate_and_verify(CensusConfig(source="graph6"))
    assert s.instances == {} and s.disagreements == [] and s.extremal == {}
    assert s.to_text().endswith("disagreements: 0\n")


def test_kernel_and_reference_engines_agree():
    base = CensusConfig(n_values=(1, 2, 3, 4), c_profiles=("const:1", "bump", "ramp", "const:3/2"),
                        connected_only=False)
    a = enumerate_and_verify(dataclasses.replace(base, engine="kernel"))
    b = enumerate_and_verify(dataclasses.replace(base, engine="reference"))
    assert a.to_dict() == b.to_dict()
    assert sum(a.claims_checked.values()) > 0 and not a.disagreements


def test_jobs_do_not_change_results():
    config = CensusConfig(n_values=(3, 4, 5), theorems=("beta",), c_profiles=("const:1", "ramp"))
    serial = enumerate_and_verify(config)
    parallel = enumerate_and_verify(dataclasses.replace(config, jobs=2))
    assert serial.to_dict() == parallel.to_dict()


def test_graph6_source_counts_malformed_lines():
    lines = ("Bw", "not graph6!", "", "Ch", "B", "A_")
    s = enumerate_and_verify(CensusConfig(source="graph6", graph6_lines=lines))
    assert len(s.malformed) == 2 and "line 2" in s.malformed[0]
    assert s.graphs == {2: 1, 3: 1, 4: 1} and not s.disagreements


def test_disagreements_are_reported_and_replayable(monkeypatch):
    # break the predicate side to check that the census notices
    real = census._case_codes
    monkeypatch.setattr(census, "_case_codes", lambda *a: np.zeros_like(real(*a)))
    s = enumerate_and_verify(CensusConfig(n_values=(3,), theorems=("alpha",), check_claims=False))
    assert s.disagreements
    d = s.disagreements[0]
    g = parse_edge_list(d.edge_list)
    c, kappa = parse_profile_file(d.profile, g.n)
    replay = verify_instance(validate_instance(g, c, kappa))
    assert encode_graph6(g) == d.graph6 and replay.alpha_equality == d.equality
    assert [x.sort_key() for x in s.disagreements] == sorted(x.sort_key() for x in s.disagreements)


def test_summary_text_and_merge():
    a = CensusSummary(instances={3: 5}, graphs={3: 1}, extremal={("alpha", 3, "i"): 2})
    b = CensusSummary(instances={3: 1, 4: 2}, graphs={3: 1, 4: 1}, extremal={("alpha", 3, "i"): 1})
    text = a.merge(b).finalize().to_text()
    assert "n=3 graphs=2 instances=6" in text and "n=3 alpha case=i extremal=3" in text
    assert text.splitlines()[-2:] == ["claim-violations: 0", "disagreements: 0"]


def test_bad_config():
    with pytest.raises(ValueError):
        enumerate_and_verify(CensusConfig(n_values=(2,), theorems=("gamma",)))
    with pytest.raises(ValueError):
        enumerate_and_verify(CensusConfig(n_values=(2,), kappa_mode="some"))
    with pytest.raises(ValueError):
        enumerate_and_verify(CensusConfig(n_values=(2,), source="web"))


def test_c_profiles():
    assert census.c_profile("bump", 3) == [1, 1, 2]
    assert census.c_profile("ramp", 3) == [1, 2, 3]
    assert census.c_profile("const:1/2", 2) == [F(1, 2)] * 2
    assert census.c_profile("list:1,2,3", 2) == [1, 2]
    with pytest.raises(ValueError):
        census.c_profile("list:1", 2)
    with pytest.raises(ValueError):
        census.c_profile("wave", 2)


def test_kappa_profiles():
    assert census.kappa_profiles([1, 2], "all").tolist() == [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [1, 2]]
    assert census.kappa_profiles([1, 2], "constant").tolist() == [[0, 0], [1, 1]]


def test_closed_forms_small():
    for n in range(3, 6):
        for k in range(n):
            assert exact_beta(inst(Graph.complete(n), kappa=k)).value == sum(range(1, n - k))
    assert exact_beta(inst(Graph.path(5), [F(1, 2)] * 5)).value == 2


def test_expectation_sweep_small_orders():
    for n in range(1, 6):
        r = census.expectation_sweep(n, profiles=20, seed=3)
        assert r.alpha_mismatches == 0 == r.beta_mismatches and r.first_mismatch is None
    assert census.expectation_sweep(4, 5).graphs == 38


def test_expectation_sweep_profiles_match_scalar_api():
    n = 5
    codes, adjs = census.kernels.graph_masks(n, 0, 1 << 10, True)
    deg = census._popcount(adjs)
    kap, w = census.random_profiles(codes[:30], deg[:30], 3, seed=1)
    assert np.all((kap >= 0) & (kap <= deg[:30, None, :]))
    for gi in range(30):
        for p in range(3):
            i = census.profile_instance(n, int(codes[gi]), kap[gi, p], w[gi, p])
            assert expectation_by_enumeration(i, ALPHA_SET) == bound_alpha(i).total
            assert expectation_by_enumeration(i, INCENTIVES) == bound_beta(i).total


def test_expectation_sweep_detects_wrong_tables(monkeypatch):
    select, excess = census.ordering_tables(4)
    monkeypatch.setattr(census, "ordering_tables", lambda n: (select + 1, excess))
    r = census.expectation_sweep(4, profiles=5)
    assert r.alpha_mismatches > 0 and r.beta_mismatches == 0 and r.first_mismatch


def test_duality_sweep_small():
    for n in range(1, 5):
        r = census.duality_sweep(n)
        assert r.violations == 0 and r.graphs == 1 << (n * (n - 1) // 2)


def test_splitmix64_reference_value():
    # first output of the reference generator seeded with 0
    assert int(census.splitmix64(np.array([0], dtype=np.uint64))[0]) == 0xE220A8397B1DCDAF
