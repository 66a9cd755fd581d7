import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from degenset import census, cli
from degenset.greedy import InvariantViolation


@pytest.fixture
def files(tmp_path):
    paths = {
        "p3": "3 2\n0 1\n1 2\n",
        "k4": "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n",
        "dup": "3 3\n0 1\n1 0\n1 2\n",
        "bad": "2 1\n0 2\n",
        "weights": "# v c kappa\n0 1/2 0\n1 3 1\n",
        "corpus.g6": "Bw\nA_\nzz\n",
    }
    out = {}
    for name, text in paths.items():
        p = tmp_path / (name if "." in name else name + ".el")
        p.write_text(text)
        out[name] = str(p)
    return out


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = cli.run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def call_json(*argv):
    status, out, err = call(*argv)
    assert status == 0, err
    return json.loads(out)


def test_bounds_example(files):
    r = call_json("bounds", "--graph", files["p3"])
    assert r["schema_version"] == cli.SCHEMA_VERSION and r["command"] == "bounds"
    assert r["alpha_bound"] == "4/3" and r["beta_bound"] == "2"
    assert r["alpha_bound_decimal"] == pytest.approx(4 / 3)


def test_exact_beta_example(files):
    status, out, _ = call("exact-beta", "--graph", files["k4"], "--kappa", "const:1", "--output", "text")
    assert status == 0 and "beta: 3\n" in out
    r = call_json("exact-beta", "--graph", files["k4"], "--kappa", "const:1")
    assert r["beta"] == "3" and r["cost"] == "3"


def test_census_example():
    status, out, _ = call("census", "--n", "4", "--kappa", "all", "--c", "const:1", "--output", "text")
    assert status == 0 and out.endswith("disagreements: 0\n")
    r = call_json("census", "--n", "2-3", "--c", "const:1", "--c", "ramp")
    assert r["disagreements"] == [] and r["instances"] == {"2": 8, "3": 126}


def test_census_graph6_corpus(files):
    status, out, _ = call("census", "--graph6", files["corpus.g6"], "--output", "text")
    assert status == 0 and "malformed: 1" in out


def test_census_disagreement_exit_code(monkeypatch):
    real = census._case_codes
    monkeypatch.setattr(census, "_case_codes", lambda *a: np.zeros_like(real(*a)))
    status, out, _ = call("census", "--n", "3", "--theorems", "alpha")
    assert status == cli.EXIT_DISAGREEMENT
    assert json.loads(out)["disagreements"][0]["edge_list"]


def test_invariant_violation_exit_code(files, monkeypatch):
    def broken(inst):
        raise InvariantViolation("boom")
    monkeypatch.setitem(cli.INSTANCE_COMMANDS, "bounds", lambda args, inst: broken(inst))
    status, _, err = call("bounds", "--graph", files["p3"])
    assert status == cli.EXIT_INTERNAL and "boom" in err


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    [],
    ["bounds"],
    ["bounds", "--graph", "/nonexistent/file.el"],
    ["bounds", "--graph", "{bad}"],
    ["bounds", "--graph", "{p3}", "--kappa", "const:5"],
    ["bounds", "--graph", "{p3}", "--c", "const:-1"],
    ["bounds", "--graph", "{p3}", "--kappa", "list:0,1"],
    ["bounds", "--graph", "{p3}", "--kappa", "weird"],
    ["bounds", "--graph", "{p3}", "--wat"],
    ["exact-alpha", "--graph", "{k4}", "--cap-alpha", "2"],
    ["exact-alpha", "--graph", "{k4}", "--cap-alpha", "0"],
    ["census"],
    ["census", "--n", "x"],
    ["census", "--n", "2", "--c", "wave"],
    ["check-set", "--graph", "{p3}", "--set", "0,7"],
])
def test_input_errors_exit_1(files, argv):
    argv = [a.format(**{k.split(".")[0]: v for k, v in files.items()}) for a in argv]
    status, out, err = call(*argv)
    assert status == cli.EXIT_INPUT and out == "" and err


def test_weights_file_and_overrides(files):
    r = call_json("bounds", "--graph", files["p3"], "--weights", files["weights"])
    # c = (1/2, 3, 1), kappa = (0, 1, 0)
    assert r["alpha_terms"] == ["1/4", "2", "1/2"]
    r = call_json("bounds", "--graph", files["p3"], "--weights", files["weights"], "--kappa", "full")
    assert r["beta_bound"] == "0"
    r = call_json("bounds", "--graph", files["p3"], "--c", "file:" + files["weights"])
    assert r["alpha_terms"] == ["1/4", "1", "1/2"]
    r = call_json("bounds", "--graph", files["p3"], "--kappa", "file:" + files["weights"])
    assert r["alpha_terms"] == ["1/2", "2/3", "1/2"]


def test_duplicate_edges_warn(files):
    status, out, err = call("bounds", "--graph", files["dup"])
    assert status == 0 and "duplicate" in err and json.loads(out)["m"] == 2


def test_witnesses_revalidate_through_check_set(files):
    for graph, extra in ((files["p3"], []), (files["k4"], ["--kappa", "const:1"]),
                         (files["k4"], ["--c", "list:1,2,3,1/2"])):
        base = ["--graph", graph, *extra]
        witnesses = [
            call_json("greedy-set", *base)["witness"],
            call_json("exact-alpha", *base)["witness"],
            call_json("sample", *base, "--samples", "200")["witness"],
        ]
        for w in witnesses:
            r = call_json("check-set", *base, "--set", ",".join(map(str, w)), "--ordered")
            assert r["valid"] and r["bad_positions"] == []
        for cmd in (["greedy-incentives"], ["exact-beta"],
                    ["sample", "--which", "incentives", "--samples", "200"]):
            a = call_json(*cmd, *base)
            r = call_json("check-set", *base, "--set", ",".join(map(str, a["ordering"])),
                          "--iota", ",".join(map(str, a["iota"])))
            assert r["valid"] and r["cost"] == a["cost"]


def test_check_set_outcomes(files):
    r = call_json("check-set", "--graph", files["p3"], "--set", "0,2")
    assert r["valid"] and sorted(r["witness"]) == [0, 2] and r["weight"] == "2"
    r = call_json("check-set", "--graph", files["k4"], "--set", "0,1,2")
    assert not r["valid"] and r["stuck"] == [0, 1, 2]
    r = call_json("check-set", "--graph", files["p3"], "--set", "0,1,2", "--ordered")
    assert not r["valid"] and r["bad_positions"] == [1, 2]


def test_other_subcommands(files):
    r = call_json("enumerate-expect", "--graph", files["p3"])
    assert r["alpha_set_expectation"] == "4/3" == r["alpha_bound"]
    assert r["incentives_expectation"] == "2" == r["beta_bound"]
    r = call_json("simulate", "--graph", files["p3"], "--seeds", "1")
    assert r["final"] == [0, 1, 2] and r["rounds"] == 1 and r["dynamic_monopoly"]
    r = call_json("simulate", "--graph", files["k4"], "--seeds", "0", "--tau", "2,2,2,2")
    assert r["final"] == [0] and not r["dynamic_monopoly"]
    r = call_json("verify", "--graph", files["k4"], "--kappa", "const:1")
    assert r["beta_equality"] and r["t2_cases"] == ["iii"]
    r = call_json("greedy-incentives", "--graph", files["k4"], "--kappa", "const:1")
    assert r["cost"] == "3" and r["beta_bound"] == "3"
    r = call_json("expect-sweep", "--n", "4", "--profiles", "5")
    assert r["alpha_mismatches"] == 0 and r["graphs"] == 38


def test_sample_uses_documented_default_seed(files):
    a = call_json("sample", "--graph", files["k4"], "--samples", "1000")
    b = call_json("sample", "--graph", files["k4"], "--samples", "1000", "--seed", "42")
    assert a == b and a["seed"] == cli.DEFAULT_SEED == 42


def test_convert_round_trip(files, tmp_path):
    status, g6, _ = call("convert", "--graph", files["k4"], "--to", "graph6")
    assert status == 0 and g6 == "C~\n"
    path = tmp_path / "k4.g6"
    path.write_text(g6)
    status, el, _ = call("convert", "--graph", str(path), "--to", "edgelist")
    assert el == open(files["k4"]).read()
    r = call_json("bounds", "--graph", str(path))
    assert r["alpha_bound"] == "1"
    status, _, _ = call("convert", "--graph", files["corpus.g6"], "--to", "edgelist")
    assert status == cli.EXIT_INPUT


def test_output_formats(files):
    status, out, _ = call("bounds", "--graph", files["p3"], "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["schema_version", "command", "n"] and rows[1][rows[0].index("alpha_bound")] == "4/3"
    status, out, _ = call("bounds", "--graph", files["p3"], "--output", "text")
    assert "alpha_terms: 1/2 1/3 1/2" in out


def test_json_is_byte_identical_across_processes(files):
    argv = [sys.executable, "-m", "degenset", "sample", "--graph", files["k4"], "--kappa", "const:1",
            "--which", "incentives", "--samples", "3000"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["schema_version"] == 1


def test_backend_info():
    status, out, _ = call("--backend-info")
    assert status == 0 and out.strip() in ("numba", "numpy")
