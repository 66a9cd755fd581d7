"""Batched sweeps over small-graph corpora.

The kernel engine evaluates all kappa profiles of one graph at once with the
subset tables from :mod:`degenset.kernels`. Every weight profile is scaled to
integers, so equalities are decided exactly in int64. The reference engine
does the same work instance by instance with the Fraction oracles and is
used to cross-check the kernel engine on small orders.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm

import numpy as np

from . import kernels
from .bounds import potential_h1, potential_h2
from .extremal import (
    CASE_NONE,
    CensusConfig,
    CensusSummary,
    ClaimViolation,
    make_disagreement,
    verify_instance,
)
from .graph import (
    Graph,
    GraphFormatError,
    Instance,
    components,
    encode_graph6,
    format_profile_file,
    parse_rational,
    read_graph6_lines,
    scale_to_integers,
)
from .oracle import is_initial, is_terminal

KERNEL_MAX_N = 12
_CASE_CODES = {0: CASE_NONE, 1: "i", 2: "ii", 3: "iii"}
_CODE_BATCH = 1 << 16
_ROW_BUDGET = 1 << 20


def c_profile(spec: str, n: int) -> list[Fraction]:
    """Expand a weight profile spec (see :class:`CensusConfig`) for order ``n``."""
    kind, _, arg = spec.partition(":")
    if kind == "const":
        return [parse_rational(arg)] * n
    if kind == "bump":
        return [Fraction(1)] * (n - 1) + [Fraction(2)] * min(n, 1)
    if kind == "ramp":
        return [Fraction(i + 1) for i in range(n)]
    if kind == "list":
        values = [parse_rational(x) for x in arg.split(",") if x.strip()]
        if len(values) < n:
            raise ValueError(f"profile {spec!r} has {len(values)} values, need {n}")
        return values[:n]
    raise ValueError(f"unknown weight profile {spec!r}")


def kappa_profiles(degrees, mode: str) -> np.ndarray:
    degrees = [int(x) for x in degrees]
    n = len(degrees)
    if mode == "all":
        if n == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(d + 1) for d in degrees], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    if mode == "constant":
        top = min(degrees, default=0)
        return np.array([[k] * n for k in range(top + 1)], dtype=np.int64).reshape(-1, n)
    raise ValueError(f"kappa mode must be 'all' or 'constant', got {mode!r}")


def _popcount(x):
    return kernels.backend_module("numpy").popcount(x)


@dataclass
class _Prepared:
    graph: Graph
    masks: np.ndarray
    degrees: np.ndarray
    blocks: list[np.ndarray]
    weights: np.ndarray       # P x n scaled integer weights
    fractions: list[list[Fraction]]
    rd: np.ndarray
    subset_w: np.ndarray      # P x 2^n


def _prepare(masks, c_specs) -> _Prepared:
    g = Graph.from_masks([int(x) for x in masks])
    n = g.n
    fractions = [c_profile(spec, n) for spec in c_specs]
    weights = np.array([scale_to_integers(f)[0] for f in fractions], dtype=np.int64).reshape(-1, n)
    masks = np.array(g.masks, dtype=np.int64)
    return _Prepared(
        graph=g,
        masks=masks,
        degrees=np.array(g.degrees, dtype=np.int64),
        blocks=[np.array(b, dtype=np.int64) for b in components(g)],
        weights=weights,
        fractions=fractions,
        rd=kernels.residual_degrees(masks),
        subset_w=kernels.subset_sums(weights),
    )


def _case_codes(prep: _Prepared, kap: np.ndarray, theorem: str) -> np.ndarray:
    """Per-component case codes, shape (components, K, P)."""
    d = prep.degrees
    w = prep.weights
    out = np.zeros((len(prep.blocks), kap.shape[0], w.shape[0]), dtype=np.int64)
    for i, b in enumerate(prep.blocks):
        kb = kap[:, b]
        case_i = np.all(kb == d[b], axis=1)[:, None]
        clique = bool(np.all(d[b] == len(b) - 1))
        c_const = np.all(w[:, b] == w[:, b[:1]], axis=1)[None, :]
        k_const = np.all(kb == kb[:, :1], axis=1)[:, None]
        if theorem == "alpha":
            second = clique & c_const & k_const
            code = np.where(case_i, 1, np.where(second, 2, 0))
        else:
            zero = np.all(kb == 0, axis=1)[:, None]
            between = ((kb[:, 0] > 0) & (kb[:, 0] < len(b) - 1))[:, None]
            third = clique & c_const & k_const & between
            code = np.where(case_i, 1, np.where(c_const & zero, 2, np.where(third, 3, 0)))
        out[i] = code
    return out


def _label_counts(codes: np.ndarray) -> dict[str, int]:
    """Count 'i+ii' style labels over the columns of a (components, rows) code array."""
    if codes.shape[1] == 0:
        return {}
    rows, counts = np.unique(codes.T, axis=0, return_counts=True)
    return {"+".join(_CASE_CODES[int(c)] for c in row): int(k) for row, k in zip(rows, counts)}


def _instance(prep: _Prepared, kappa_row, p: int) -> Instance:
    return Instance(prep.graph, tuple(prep.fractions[p]), tuple(int(k) for k in kappa_row))


def _alpha_values(prep: _Prepared, kap: np.ndarray) -> np.ndarray:
    ok = kernels.degenerate_table(prep.rd, kap)
    return np.stack([np.where(ok, sw[None, :], -1).max(axis=1) for sw in prep.subset_w], axis=1)


def _beta_values(prep: _Prepared, kap: np.ndarray) -> np.ndarray:
    nk, npf = kap.shape[0], prep.weights.shape[0]
    rows_k = np.repeat(kap, npf, axis=0)
    rows_w = np.tile(prep.weights, (nk, 1))
    cost, _ = kernels.incentive_table(prep.rd, rows_k, rows_w)
    return cost[:, -1].reshape(nk, npf)


def _initial_checks(prep: _Prepared, kap, pidx, alpha) -> np.ndarray:
    """For tight rows: does every vertex satisfy alpha = c(u) + alpha(reduce_initial)."""
    n = prep.graph.n
    full = (1 << n) - 1
    subsets = np.arange(1 << n, dtype=np.int64)
    good = np.ones(kap.shape[0], dtype=bool)
    for u in range(n):
        nbr = prep.masks[u]
        in_n = ((nbr >> np.arange(n)) & 1).astype(np.int64)
        dropped = np.zeros(kap.shape[0], dtype=np.int64)
        for v in range(n):
            if in_n[v]:
                dropped |= np.where(kap[:, v] == 0, np.int64(1) << v, 0)
        keep = (full & ~(1 << u)) & ~dropped
        dprime = _popcount(prep.masks[None, :] & keep[:, None])
        kprime = np.clip(np.minimum(kap - in_n[None, :], dprime), 0, None)
        ok = kernels.degenerate_table(prep.rd, kprime)
        inside = (subsets[None, :] & ~keep[:, None]) == 0
        best = np.where(ok & inside, prep.subset_w[pidx], -1).max(axis=1)
        good &= alpha == prep.weights[pidx, u] + best
    return good


def _terminal_checks(prep: _Prepared, kap, pidx, beta) -> np.ndarray:
    n = prep.graph.n
    d = prep.degrees
    good = np.ones(kap.shape[0], dtype=bool)
    for u in range(n):
        in_n = ((prep.masks[u] >> np.arange(n)) & 1).astype(bool)
        lowered = in_n[None, :] & (kap == d[None, :])
        kprime = kap - lowered
        cost, _ = kernels.incentive_table(prep.rd, kprime, prep.weights[pidx])
        rest = cost[:, ((1 << n) - 1) ^ (1 << u)]
        good &= beta == prep.weights[pidx, u] * (d[u] - kap[:, u]) + rest
    return good


def _potential_checks(prep: _Prepared, kap, pidx, theorem) -> np.ndarray:
    """Constant potential on every component whose degrees are all positive."""
    d = prep.degrees
    w = prep.weights[pidx]
    if theorem == "alpha":
        num = w * (d - kap)
        den = np.broadcast_to(d * (d + 1), kap.shape)
    else:
        num = w * (d - kap) * (d + kap + 1)
        den = np.broadcast_to(2 * d * (d + 1), kap.shape)
    good = np.ones(kap.shape[0], dtype=bool)
    for b in prep.blocks:
        if np.any(d[b] == 0):
            continue
        first = b[0]
        good &= np.all(num[:, b] * den[:, first:first + 1] == num[:, first:first + 1] * den[:, b], axis=1)
    return good


def _claim4a_checks(prep: _Prepared, kap, codes_rows) -> np.ndarray:
    d = prep.degrees
    good = np.ones(kap.shape[0], dtype=bool)
    for i, b in enumerate(prep.blocks):
        if len(b) < 3:
            continue
        positive = kap[:, b[0]] < d[b[0]]
        applies = positive & (codes_rows[i] != 2)
        good &= ~applies | np.all(kap[:, b] > 0, axis=1)
    return good


def _kernel_graph(masks, config: CensusConfig, summary: CensusSummary):
    prep = _prepare(masks, config.c_profiles)
    n = prep.graph.n
    kap_all = kappa_profiles(prep.degrees, config.kappa_mode)
    npf = prep.weights.shape[0]
    summary.graphs[n] = summary.graphs.get(n, 0) + 1
    summary.instances[n] = summary.instances.get(n, 0) + kap_all.shape[0] * npf
    scale = lcm(1, *range(1, n + 1))
    step = max(1, _ROW_BUDGET // ((1 << n) * npf))
    for start in range(0, kap_all.shape[0], step):
        kap = kap_all[start:start + step]
        for theorem in config.theorems:
            t = prep.degrees[None, :] - kap
            per = scale // (prep.degrees + 1)
            if theorem == "alpha":
                exact = _alpha_values(prep, kap) * scale
                bound = (kap + 1) * per[None, :]
            else:
                exact = _beta_values(prep, kap) * 2 * scale
                bound = t * (t + 1) * per[None, :]
            bound = bound @ prep.weights.T
            equal = exact == bound
            codes = _case_codes(prep, kap, theorem)
            holds = np.all(codes != 0, axis=0)
            ks, ps = np.nonzero(equal)
            for label, count in _label_counts(codes[:, ks, ps]).items():
                key = (theorem, n, label)
                summary.extremal[key] = summary.extremal.get(key, 0) + count
            for k, p in zip(*np.nonzero(equal != holds)):
                inst = _instance(prep, kap[k], p)
                summary.disagreements.append(make_disagreement(theorem, inst, config.cap))
            if config.check_claims:
                _claims(prep, kap, equal, codes, exact, scale, theorem, summary)


def _claims(prep, kap, equal, codes, exact, scale, theorem, summary):
    ks, ps = np.nonzero(equal)
    if ks.size == 0:
        return
    rows = kap[ks]
    if theorem == "alpha":
        value = exact[ks, ps] // scale
        structural = _initial_checks(prep, rows, ps, value)
        name = "initial"
    else:
        value = exact[ks, ps] // (2 * scale)
        structural = _terminal_checks(prep, rows, ps, value)
        name = "terminal"
    checks = [(name, structural),
              ("potential-h1" if theorem == "alpha" else "potential-h2",
               _potential_checks(prep, rows, ps, theorem))]
    if theorem == "beta":
        checks.append(("claim-4a", _claim4a_checks(prep, rows, codes[:, ks, ps])))
    summary.claims_checked[theorem] = summary.claims_checked.get(theorem, 0) + int(ks.size)
    for claim, good in checks:
        for r in np.flatnonzero(~good):
            inst = _instance(prep, rows[r], ps[r])
            summary.claim_violations.append(
                ClaimViolation(claim, encode_graph6(inst.graph), format_profile_file(inst)))


def _reference_graph(g: Graph, config: CensusConfig, summary: CensusSummary):
    """Instance-by-instance twin of :func:`_kernel_graph` on Fractions."""
    n = g.n
    kap_all = kappa_profiles(g.degrees, config.kappa_mode)
    profiles = [c_profile(spec, n) for spec in config.c_profiles]
    summary.graphs[n] = summary.graphs.get(n, 0) + 1
    summary.instances[n] = summary.instances.get(n, 0) + kap_all.shape[0] * len(profiles)
    blocks = components(g)
    for row in kap_all:
        for c in profiles:
            inst = Instance(g, tuple(c), tuple(int(k) for k in row))
            report = verify_instance(inst, config.cap)
            for theorem in config.theorems:
                alpha = theorem == "alpha"
                equal = report.alpha_equality if alpha else report.beta_equality
                agrees = report.t1_agrees if alpha else report.t2_agrees
                cases = report.t1_cases if alpha else report.t2_cases
                if equal:
                    key = (theorem, n, "+".join(cases))
                    summary.extremal[key] = summary.extremal.get(key, 0) + 1
                if not agrees:
                    summary.disagreements.append(make_disagreement(theorem, inst, config.cap))
                if equal and config.check_claims:
                    summary.claims_checked[theorem] = summary.claims_checked.get(theorem, 0) + 1
                    for claim in _reference_claims(inst, blocks, cases, alpha, config.cap):
                        summary.claim_violations.append(
                            ClaimViolation(claim, encode_graph6(g), format_profile_file(inst)))


def _reference_claims(inst: Instance, blocks, cases, alpha: bool, cap: int):
    structural = is_initial if alpha else is_terminal
    if not all(structural(inst, u, cap) for u in range(inst.n)):
        yield "initial" if alpha else "terminal"
    potential = potential_h1 if alpha else potential_h2
    for b in blocks:
        if all(inst.degrees[u] > 0 for u in b) and len({potential(inst, u) for u in b}) > 1:
            yield "potential-h1" if alpha else "potential-h2"
            break
    if not alpha:
        for b, case in zip(blocks, cases):
            if len(b) >= 3 and potential_h2(inst, b[0]) > 0 and case != "ii":
                if any(inst.kappa[u] == 0 for u in b):
                    yield "claim-4a"
                    break


def _use_kernel(config: CensusConfig, n: int) -> bool:
    if config.engine == "reference":
        return False
    if config.engine == "kernel" and n > KERNEL_MAX_N:
        raise ValueError(f"kernel engine supports n <= {KERNEL_MAX_N}")
    return n <= KERNEL_MAX_N


def _run_graphs(graphs, config: CensusConfig) -> CensusSummary:
    summary = CensusSummary()
    for masks in graphs:
        n = len(masks)
        if _use_kernel(config, n):
            _kernel_graph(masks, config, summary)
        else:
            _reference_graph(Graph.from_masks(masks), config, summary)
    return summary


def _labeled_task(args) -> CensusSummary:
    n, start, stop, config = args
    _, adjs = kernels.graph_masks(n, start, stop, config.connected_only)
    return _run_graphs([tuple(int(x) for x in row) for row in adjs], config)


def _graph6_task(args) -> CensusSummary:
    graphs, config = args
    return _run_graphs(graphs, config)


def _tasks(config: CensusConfig):
    if config.source == "labeled":
        for n in config.n_values:
            if n < 1:
                continue
            total = 1 << (n * (n - 1) // 2)
            for start in range(0, total, _CODE_BATCH):
                yield _labeled_task, (n, start, min(total, start + _CODE_BATCH), config)
    elif config.source == "graph6":
        batch = []
        for _, item in read_graph6_lines(config.graph6_lines):
            if isinstance(item, GraphFormatError):
                continue
            if config.n_values and item.n not in config.n_values:
                continue
            if config.connected_only and len(components(item)) > 1:
                continue
            batch.append(item.masks)
            if len(batch) == 256:
                yield _graph6_task, (batch, config)
                batch = []
        if batch:
            yield _graph6_task, (batch, config)
    else:
        raise ValueError(f"graph source must be 'labeled' or 'graph6', got {config.source!r}")


def _call(task):
    fn, args = task
    return fn(args)


def run(config: CensusConfig) -> CensusSummary:
    """Execute a census; results do not depend on ``config.jobs``."""
    for theorem in config.theorems:
        if theorem not in ("alpha", "beta"):
            raise ValueError(f"unknown theorem {theorem!r}")
    summary = CensusSummary()
    if config.source == "graph6":
        for lineno, item in read_graph6_lines(config.graph6_lines):
            if isinstance(item, GraphFormatError):
                summary.malformed.append(str(item))
    tasks = list(_tasks(config))
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            for part in pool.map(_call, tasks):
                summary.merge(part)
    else:
        for task in tasks:
            summary.merge(_call(task))
    return summary.finalize()


# -- expectation and duality sweeps --------------------------------------------

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def splitmix64(x: np.ndarray) -> np.ndarray:
    """Vectorised SplitMix64 finaliser (wrapping uint64 arithmetic)."""
    z = (np.asarray(x, dtype=np.uint64) + np.uint64(0x9E3779B97F4A7C15)) & _MASK64
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


WEIGHT_DENOMINATOR = 12


def random_profiles(codes: np.ndarray, degrees: np.ndarray, profiles: int, seed: int):
    """Deterministic pseudo-random (c, kappa) profiles for each graph code.

    Returns ``kappa`` with 0 <= kappa <= d and integer weights ``w`` meaning
    ``c = w / 12``, where ``c = a / b`` with a in 1..9 and b in 1..4.
    Shapes are (graphs, profiles, n).
    """
    g, n = degrees.shape
    idx = (np.uint64(seed) * np.uint64(1_000_003)
           + codes.astype(np.uint64)[:, None, None] * np.uint64(4096)
           + np.arange(profiles, dtype=np.uint64)[None, :, None] * np.uint64(64)
           + np.arange(n, dtype=np.uint64)[None, None, :])
    h1 = splitmix64(idx)
    h2 = splitmix64(h1)
    kappa = (h1 % (degrees[:, None, :].astype(np.uint64) + np.uint64(1))).astype(np.int64)
    num = (h2 % np.uint64(9)).astype(np.int64) + 1
    den = ((h2 >> np.uint64(8)) % np.uint64(4)).astype(np.int64) + 1
    return kappa, num * (WEIGHT_DENOMINATOR // den)


@dataclass
class ExpectationSweep:
    n: int
    graphs: int = 0
    instances: int = 0
    alpha_mismatches: int = 0
    beta_mismatches: int = 0
    first_mismatch: tuple | None = None


def ordering_tables(n: int):
    """Exact per-vertex selection and incentive counts over all n! orderings.

    ``select[u, M, k]``: orderings in which at most k members of M precede u.
    ``excess[u, M, k]``: sum over orderings of max(0, (# of M before u) - k).
    """
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    hist = kernels.backdeg_histogram_table(perms)
    levels = np.arange(n + 1)
    select = np.cumsum(hist, axis=2)
    excess = np.stack(
        [(hist * np.maximum(levels - k, 0)[None, None, :]).sum(axis=2) for k in range(n + 1)],
        axis=2,
    )
    return select, excess


def expectation_sweep(n: int, profiles: int = 50, seed: int = 0,
                      connected_only: bool = True, batch: int = 1 << 13) -> ExpectationSweep:
    """Compare n!-ordering averages with both closed-form bounds on every labeled graph."""
    out = ExpectationSweep(n)
    select, excess = ordering_tables(n)
    nfact = factorial(n)
    total = 1 << (n * (n - 1) // 2)
    for start in range(0, total, batch):
        codes, adjs = kernels.graph_masks(n, start, min(total, start + batch), connected_only)
        if codes.size == 0:
            continue
        deg = _popcount(adjs)
        kap, w = random_profiles(codes, deg, profiles, seed)
        vert = np.arange(n)[None, None, :]
        adj3 = np.broadcast_to(adjs[:, None, :], kap.shape)
        sel = select[vert, adj3, kap]
        exc = excess[vert, adj3, kap]
        per = (nfact // (deg + 1))[:, None, :]
        t = deg[:, None, :] - kap
        alpha_bad = (w * sel).sum(axis=2) != (w * (kap + 1) * per).sum(axis=2)
        beta_bad = (w * exc).sum(axis=2) != (w * (t * (t + 1) // 2) * per).sum(axis=2)
        out.graphs += codes.size
        out.instances += codes.size * profiles
        out.alpha_mismatches += int(alpha_bad.sum())
        out.beta_mismatches += int(beta_bad.sum())
        if out.first_mismatch is None and (alpha_bad.any() or beta_bad.any()):
            gi, pi = np.argwhere(alpha_bad | beta_bad)[0]
            out.first_mismatch = (int(codes[gi]), kap[gi, pi].tolist(), w[gi, pi].tolist())
    return out


def profile_instance(n: int, code: int, kappa, weights) -> Instance:
    """Rebuild an :class:`Instance` from a sweep's (code, kappa, scaled weights)."""
    _, adjs = kernels.graph_masks(n, code, code + 1, False)
    g = Graph.from_masks([int(x) for x in adjs[0]])
    c = tuple(Fraction(int(x), WEIGHT_DENOMINATOR) for x in weights)
    return Instance(g, c, tuple(int(k) for k in kappa))


@dataclass
class DualitySweep:
    n: int
    graphs: int = 0
    checks: int = 0
    violations: int = 0


def duality_sweep(n: int) -> DualitySweep:
    """S degenerate under kappa  <=>  V - S activates everything under d - kappa."""
    out = DualitySweep(n)
    full = (1 << n) - 1
    complement = full ^ np.arange(1 << n, dtype=np.int64)
    total = 1 << (n * (n - 1) // 2)
    _, adjs = kernels.graph_masks(n, 0, total, False)
    for adj in adjs:
        deg = _popcount(adj)
        kap = kappa_profiles(deg, "all")
        ok = kernels.degenerate_table(kernels.residual_degrees(adj), kap)
        monopoly = kernels.activation_table(adj, deg[None, :] - kap)
        out.graphs += 1
        out.checks += ok.size
        out.violations += int(np.count_nonzero(ok != monopoly[:, complement]))
    return out
