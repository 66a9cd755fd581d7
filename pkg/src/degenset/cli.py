"""Command line front end: ``degenset <subcommand> [options]``.

Exit status: 0 success, 1 bad input or usage, 2 internal invariant
violation, 3 census disagreement or claim violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import kernels
from .bounds import bound_alpha, bound_beta
from .census import c_profile, expectation_sweep
from .degeneracy import (
    DegenWitness,
    check_degenerate,
    dual_threshold,
    simulate_activation,
    witness_violations,
)
from .extremal import CensusConfig, enumerate_and_verify, verify_instance
from .graph import (
    Graph,
    GraphFormatError,
    Instance,
    InstanceError,
    encode_graph6,
    format_edge_list,
    format_rational,
    parse_edge_list,
    parse_graph6,
    parse_profile_file,
    parse_rational,
    validate_instance,
)
from .greedy import (
    ALPHA_SET,
    INCENTIVES,
    IncentiveAssignment,
    InvariantViolation,
    expectation_by_enumeration,
    greedy_degenerate_set,
    greedy_incentives,
    incentive_violations,
    monte_carlo_estimate,
)
from .oracle import DEFAULT_CAP, exact_alpha, exact_beta

SCHEMA_VERSION = 1
DEFAULT_SEED = 42
DEFAULT_SAMPLES = 10_000

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_DISAGREEMENT = 0, 1, 2, 3

SUBCOMMANDS = (
    "bounds", "greedy-set", "greedy-incentives", "sample", "enumerate-expect",
    "exact-alpha", "exact-beta", "check-set", "simulate", "verify", "census", "convert",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: str | None = None
    weights: str | None = None
    fmt: str = "auto"
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    output: str = "json"
    cap_alpha: int = DEFAULT_CAP
    cap_beta: int = DEFAULT_CAP

    def __post_init__(self):
        if self.cap_alpha < 1 or self.cap_beta < 1:
            raise UsageError("oracle caps must be positive")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")


# -- input --------------------------------------------------------------------

def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _graph_format(path: str, fmt: str) -> str:
    if fmt != "auto":
        return fmt
    return "graph6" if Path(path).suffix in (".g6", ".graph6") else "edgelist"


def load_graph(path: str, fmt: str = "auto") -> Graph:
    text = _read_text(path)
    if _graph_format(path, fmt) == "graph6":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise GraphFormatError("empty graph6 file")
        return parse_graph6(lines[0])
    return parse_edge_list(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma separated list of integers, got {text!r}") from None


def _profile(spec: str | None, n: int, g: Graph, file_values, kind: str):
    """Resolve ``const:<v>``, ``list:...``, ``file:<path>`` and (kappa only) ``full``."""
    if spec is None:
        return file_values
    head, _, arg = spec.partition(":")
    if kind == "kappa":
        if spec == "full":
            return list(g.degrees)
        if head == "const":
            return [int(arg)] * n
        if head == "list":
            values = _int_list(arg)
            if len(values) != n:
                raise UsageError(f"--kappa list needs {n} values, got {len(values)}")
            return values
        if head == "file":
            return parse_profile_file(_read_text(arg), n)[1]
        raise UsageError(f"bad --kappa spec {spec!r}")
    if head == "file":
        return parse_profile_file(_read_text(arg), n)[0]
    if head in ("const", "list", "bump", "ramp"):
        return c_profile(spec, n)
    raise UsageError(f"bad --c spec {spec!r}")


def load_instance(args) -> Instance:
    g = load_graph(args.graph, args.format)
    c, kappa = None, None
    if args.weights:
        c, kappa = parse_profile_file(_read_text(args.weights), g.n)
    c = _profile(args.c, g.n, g, c, "c")
    kappa = _profile(args.kappa, g.n, g, kappa, "kappa")
    return validate_instance(g, c, kappa)


# -- output -------------------------------------------------------------------

def _rational_fields(name: str, q: Fraction) -> dict:
    return {name: format_rational(q), f"{name}_decimal": float(q)}


def _assignment_fields(a: IncentiveAssignment) -> dict:
    return {"iota": list(a.iota), "ordering": list(a.ordering), **_rational_fields("cost", a.cost)}


def _emit(report: dict, output: str, out) -> None:
    if output == "json":
        out.write(json.dumps(report, indent=2) + "\n")
        return
    flat = {k: (" ".join(str(x) for x in v) if isinstance(v, list) else v) for k, v in report.items()}
    if output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(flat.keys())
        writer.writerow(flat.values())
        out.write(buf.getvalue())
    else:
        for key, value in flat.items():
            out.write(f"{key}: {value}\n")


# -- subcommands --------------------------------------------------------------

def cmd_bounds(args, inst):
    fa, fb = bound_alpha(inst), bound_beta(inst)
    return {
        "n": inst.n, "m": inst.graph.m,
        **_rational_fields("alpha_bound", fa.total),
        **_rational_fields("beta_bound", fb.total),
        "alpha_terms": [format_rational(x) for x in fa.per_vertex],
        "beta_terms": [format_rational(x) for x in fb.per_vertex],
    }


def cmd_greedy_set(args, inst):
    w = greedy_degenerate_set(inst)
    return {"witness": list(w.vertices), **_rational_fields("weight", inst.weight(w)),
            **_rational_fields("alpha_bound", bound_alpha(inst).total)}


def cmd_greedy_incentives(args, inst):
    a = greedy_incentives(inst)
    return {**_assignment_fields(a), **_rational_fields("beta_bound", bound_beta(inst).total)}


def cmd_sample(args, inst):
    which = args.which
    r = monte_carlo_estimate(inst, which, args.samples, args.seed)
    report = {"which": which, "samples": r.samples, "seed": r.seed,
              **_rational_fields("mean", r.exact_mean), **_rational_fields("best", r.best)}
    if isinstance(r.witness, DegenWitness):
        report["witness"] = list(r.witness.vertices)
    else:
        report.update(_assignment_fields(r.witness))
    return report


def cmd_enumerate_expect(args, inst):
    return {
        **_rational_fields("alpha_set_expectation", expectation_by_enumeration(inst, ALPHA_SET)),
        **_rational_fields("incentives_expectation", expectation_by_enumeration(inst, INCENTIVES)),
        **_rational_fields("alpha_bound", bound_alpha(inst).total),
        **_rational_fields("beta_bound", bound_beta(inst).total),
    }


def cmd_exact_alpha(args, inst):
    r = exact_alpha(inst, args.cap_alpha)
    return {**_rational_fields("alpha", r.value), "witness": list(r.witness.vertices)}


def cmd_exact_beta(args, inst):
    r = exact_beta(inst, args.cap_beta)
    return {**_rational_fields("beta", r.value), **_assignment_fields(r.witness)}


def cmd_check_set(args, inst):
    vertices = _int_list(args.set)
    if args.iota is not None:
        iota = _int_list(args.iota)
        if len(iota) != inst.n:
            raise UsageError(f"--iota needs {inst.n} values")
        cost = sum((inst.c[u] * iota[u] for u in range(inst.n)), Fraction(0))
        bad = incentive_violations(inst, IncentiveAssignment(tuple(iota), tuple(vertices), cost))
        return {"kind": "incentives", "valid": not bad, "bad_positions": bad,
                **_rational_fields("cost", cost)}
    if args.ordered:
        bad = witness_violations(inst, vertices)
        return {"kind": "ordering", "valid": not bad, "bad_positions": bad,
                **_rational_fields("weight", inst.weight(set(vertices)))}
    result = check_degenerate(inst, vertices)
    if isinstance(result, DegenWitness):
        return {"kind": "set", "valid": True, "witness": list(result.vertices),
                **_rational_fields("weight", inst.weight(result))}
    return {"kind": "set", "valid": False, "stuck": sorted(result.stuck)}


def cmd_simulate(args, inst):
    tau = list(dual_threshold(inst).tau) if args.tau is None else _int_list(args.tau)
    seeds = _int_list(args.seeds) if args.seeds else []
    final, rounds = simulate_activation(inst.graph, tau, seeds)
    return {"tau": tau, "seeds": sorted(set(seeds)), "final": sorted(final),
            "rounds": rounds, "dynamic_monopoly": len(final) == inst.n}


def cmd_verify(args, inst):
    report = verify_instance(inst, min(args.cap_alpha, args.cap_beta))
    out = {}
    for name, value in report.to_dict().items():
        if name in ("alpha_bound", "alpha_exact", "beta_bound", "beta_exact"):
            out.update(_rational_fields(name, getattr(report, name)))
        else:
            out[name] = value
    return out


def _n_values(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        lo, _, hi = part.partition("-")
        try:
            out.extend(range(int(lo), int(hi or lo) + 1))
        except ValueError:
            raise UsageError(f"bad --n value {text!r}") from None
    return tuple(out)


def cmd_census(args):
    graph6_lines = ()
    source = "labeled"
    if args.graph6:
        source = "graph6"
        graph6_lines = tuple(_read_text(args.graph6).splitlines())
    config = CensusConfig(
        n_values=_n_values(args.n) if args.n else (),
        source=source,
        graph6_lines=graph6_lines,
        kappa_mode=args.kappa or "all",
        c_profiles=tuple(args.c or ["const:1"]),
        connected_only=not args.all_graphs,
        theorems=tuple(t.strip() for t in args.theorems.split(",")),
        check_claims=not args.no_claims,
        engine=args.engine,
        cap=min(args.cap_alpha, args.cap_beta),
        jobs=args.jobs,
    )
    if source == "labeled" and not config.n_values:
        raise UsageError("census over labeled graphs needs --n")
    for spec in config.c_profiles:
        c_profile(spec, 1)
    summary = enumerate_and_verify(config)
    return summary


def cmd_expect_sweep(args):
    return expectation_sweep(args.n, args.profiles, args.seed)


def cmd_convert(args):
    text = _read_text(args.graph)
    if _graph_format(args.graph, args.format) == "graph6":
        graphs = [parse_graph6(line) for line in text.splitlines() if line.strip()]
    else:
        graphs = [parse_edge_list(text)]
    if args.to == "graph6":
        return "".join(encode_graph6(g) + "\n" for g in graphs)
    return "\n".join(format_edge_list(g) for g in graphs)


INSTANCE_COMMANDS = {
    "bounds": cmd_bounds,
    "greedy-set": cmd_greedy_set,
    "greedy-incentives": cmd_greedy_incentives,
    "sample": cmd_sample,
    "enumerate-expect": cmd_enumerate_expect,
    "exact-alpha": cmd_exact_alpha,
    "exact-beta": cmd_exact_beta,
    "check-set": cmd_check_set,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--cap-alpha", type=int, default=DEFAULT_CAP)
    common.add_argument("--cap-beta", type=int, default=DEFAULT_CAP)
    common.add_argument("--format", choices=("auto", "edgelist", "graph6"), default="auto")

    inst = _Parser(add_help=False, parents=[common])
    inst.add_argument("--graph", required=True, help="edge-list or graph6 file ('-' for stdin)")
    inst.add_argument("--weights", help="profile file with lines 'v c kappa'")
    inst.add_argument("--c", help="const:<v> | list:<v0>,<v1>,... | file:<path> | bump | ramp")
    inst.add_argument("--kappa", help="const:<k> | list:<k0>,... | file:<path> | full")

    parser = _Parser(prog="degenset", description=__doc__.splitlines()[0])
    parser.add_argument("--backend-info", action="store_true", help="print the kernel backend and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in INSTANCE_COMMANDS:
        p = sub.add_parser(name, parents=[inst])
        if name == "sample":
            p.add_argument("--which", choices=(ALPHA_SET, INCENTIVES), default=ALPHA_SET)
        if name == "check-set":
            p.add_argument("--set", required=True, help="comma separated vertices")
            p.add_argument("--ordered", action="store_true",
                           help="check the given order as a witness instead of peeling")
            p.add_argument("--iota", help="incentives per vertex; --set is then the ordering")
        if name == "simulate":
            p.add_argument("--seeds", default="", help="comma separated seed vertices")
            p.add_argument("--tau", help="thresholds per vertex (default d - kappa)")

    census = sub.add_parser("census", parents=[common])
    census.add_argument("--n", help="orders, e.g. 4 or 2-6 or 2,3,5")
    census.add_argument("--graph6", help="graph6 corpus instead of labeled enumeration")
    census.add_argument("--kappa", choices=("all", "constant"), default="all")
    census.add_argument("--c", action="append", help="weight profile (repeatable)")
    census.add_argument("--theorems", default="alpha,beta")
    census.add_argument("--engine", choices=("auto", "kernel", "reference"), default="auto")
    census.add_argument("--all-graphs", action="store_true", help="include disconnected graphs")
    census.add_argument("--no-claims", action="store_true", help="skip the structural claim checks")
    census.add_argument("--jobs", type=int, default=1)

    sweep = sub.add_parser("expect-sweep", parents=[common],
                           help="ordering averages vs. both bounds on all connected labeled graphs")
    sweep.add_argument("--n", type=int, required=True)
    sweep.add_argument("--profiles", type=int, default=50)

    convert = sub.add_parser("convert", parents=[common])
    convert.add_argument("--graph", required=True)
    convert.add_argument("--to", choices=("graph6", "edgelist"), required=True)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            status = _dispatch(parser, argv, out)
        for w in caught:
            err.write(f"warning: {w.message}\n")
        return status
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except InvariantViolation as exc:
        err.write(f"internal invariant violated: {exc}\n")
        return EXIT_INTERNAL
    except (GraphFormatError, InstanceError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def _dispatch(parser, argv, out) -> int:
    args = parser.parse_args(argv)
    if args.backend_info:
        out.write(f"{kernels.BACKEND}\n")
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        raise UsageError(f"a subcommand is required: {', '.join(SUBCOMMANDS)}")
    RunConfig(command=args.command, graph=getattr(args, "graph", None),
              weights=getattr(args, "weights", None), fmt=args.format, seed=args.seed,
              samples=args.samples, output=args.output, cap_alpha=args.cap_alpha,
              cap_beta=args.cap_beta)
    if args.command == "convert":
        out.write(cmd_convert(args))
        return EXIT_OK
    if args.command == "census":
        summary = cmd_census(args)
        if args.output == "json":
            _emit({"schema_version": SCHEMA_VERSION, "command": "census", **summary.to_dict()},
                  "json", out)
        else:
            out.write(summary.to_text())
        failed = summary.disagreements or summary.claim_violations
        return EXIT_DISAGREEMENT if failed else EXIT_OK
    if args.command == "expect-sweep":
        r = cmd_expect_sweep(args)
        _emit({"schema_version": SCHEMA_VERSION, "command": "expect-sweep", **r.__dict__,
               "first_mismatch": list(r.first_mismatch or [])}, args.output, out)
        return EXIT_DISAGREEMENT if r.alpha_mismatches or r.beta_mismatches else EXIT_OK
    instance = load_instance(args)
    report = INSTANCE_COMMANDS[args.command](args, instance)
    _emit({"schema_version": SCHEMA_VERSION, "command": args.command, **report}, args.output, out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
