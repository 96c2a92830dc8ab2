import importlib
import io
import json
import math

import pytest

from dkergm import cli
from dkergm.graph import format_edge_list

from conftest import EDGE3, KITE4, PATH, TRIANGLE

SPEC_OPERATIONS = [
    "graph.degree_vector",
    "graph.bi_degree_vector",
    "graph.scaled_bi_degree",
    "graph.edges_from_degrees",
    "graph.degrees_from_bidegrees",
    "enumeration.enumerate_graphs",
    "enumeration.count_no_isolated",
    "enumeration.nu",
    "enumeration.dominance_ratio",
    "constructions.regular_graph",
    "constructions.near_regular_graph",
    "constructions.spectrum_graph",
    "constructions.spectrum_bidegree_nonzeros",
    "polytope.polytope_B",
    "polytope.polytope_A",
    "polytope.mle_exists_1k",
    "polytope.interior_membership",
    "model1k.alpha_from_p",
    "model1k.psi_1k",
    "model1k.log_prob_1k",
    "model1k.expected_stats_1k",
    "model1k.change_statistic",
    "model1k.fit_1k",
    "model1k.er_embedding",
    "model1k.prob_degree_present",
    "model2k.psi_2k",
    "model2k.log_prob_2k",
    "model2k.fit_2k",
    "model2k.bidegree_nonzero_upper_bound",
    "asymptotics.lambda_k",
    "asymptotics.mc_degree_presence",
    "asymptotics.mc_nonzero_count",
    "asymptotics.h_sequence",
    "asymptotics.singularity_experiment",
]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, g):
    p = tmp_path / name
    p.write_text(format_edge_list(g))
    return str(p)


def test_every_operation_is_dispatched():
    for op in SPEC_OPERATIONS:
        assert op in cli.OPERATIONS, op
    for op, command in cli.OPERATIONS.items():
        mod, name = op.split(".")
        assert callable(getattr(importlib.import_module(f"dkergm.{mod}"), name)), op
        assert command in cli.COMMANDS


def test_stats_kite4(tmp_path):
    code, out, _ = run("stats", "--graph", write(tmp_path, "kite4.edges", KITE4))
    assert code == 0
    js = json.loads(out)
    assert js["degree_vector"] == [0, 1, 2, 1]
    assert js["bi_degree_vector"] == [0, 0, 1, 1, 2, 0]
    assert js["scaled_bi_degree"] == ["0", "0", "4/3", "1", "5/3", "0"]


def test_psi_uniform():
    code, out, _ = run("psi", "--model", "1k", "--n", "3", "--alpha", "0,0")
    assert code == 0
    assert json.loads(out)["psi"] == pytest.approx(math.log(8), rel=1e-15)


def test_psi_minus_inf_round_trip(tmp_path):
    code, out, _ = run("psi", "--n", "3", "--alpha=-inf,0.5", "--graph", write(tmp_path, "t", TRIANGLE))
    js = json.loads(out)
    assert code == 0 and js["alpha"][0] == "-inf"
    assert js["log_prob"] == pytest.approx(-js["psi"])


def test_psi_extras():
    code, out, _ = run("psi", "--n", "3", "--present", "2", "--change", "0,1")
    js = json.loads(out)
    assert js["prob_degree_present"] == pytest.approx(0.5) and js["change_statistic"] == 0
    code, out, _ = run("psi", "--n", "3", "--p", "0.25,0.25,0.5")
    assert code == 0 and json.loads(out)["alpha"] == pytest.approx([math.log(0.5)] * 2)
    code, out, _ = run("psi", "--n", "4", "--er-p", "0.5")
    assert json.loads(out)["alpha"] == [0.0, 0.0, 0.0]


def test_psi_2k_out_of_support(tmp_path):
    code, _, err = run("psi", "--model", "2k", "--n", "3", "--graph", write(tmp_path, "e", EDGE3))
    assert code == 1 and "isolated" in err


def test_fit_2k_exists(tmp_path):
    obs = [write(tmp_path, "tri.edges", TRIANGLE), write(tmp_path, "path.edges", PATH)]
    code, out, _ = run("fit", "--model", "2k", "--obs", *obs)
    js = json.loads(out)
    assert code == 0 and js["exists"] is True and js["moment_residual"] <= 1e-8
    assert js["alpha"][0]["alpha"] == "-inf"


def test_fit_require_exists_exit_code(tmp_path):
    obs = write(tmp_path, "tri.edges", TRIANGLE)
    assert run("fit", "--obs", obs)[0] == 0
    code, out, err = run("fit", "--obs", obs, "--require-exists")
    assert code == 1 and json.loads(out)["exists"] is False and "does not exist" in err


def test_exists_reports_failed_clause():
    code, out, _ = run("exists", "--n", "3", "--mean", "1/3,2")
    js = json.loads(out)
    assert code == 0 and js["closed_form"] is False and js["hull_interior"] is False
    assert any("odd-degree" in c for c in js["failed_clauses"])
    code, out, _ = run("exists", "--n", "3", "--mean", "1/3,4/3", "--vertices")
    js = json.loads(out)
    assert js["closed_form"] and js["membership"] == "interior" and len(js["A_vertices"]) == 4


def test_enumerate_json_schema():
    code, out, _ = run("enumerate", "--n", "3")
    js = json.loads(out)
    assert code == 0
    assert js["entries"] == [
        {"count": 1, "key": [0, 0, 3]},
        {"count": 3, "key": [0, 2, 1]},
        {"count": 3, "key": [1, 2, 0]},
        {"count": 1, "key": [3, 0, 0]},
    ]
    assert js["f"] == 4 and js["total"] == 8


def test_enumerate_cap():
    code, _, err = run("enumerate", "--n", "8")
    assert code == 1 and "cap" in err


def test_construct_edge_list_and_errors():
    code, out, _ = run("construct", "regular", "--n", "4", "--k", "2")
    assert code == 0 and out.splitlines()[0] == "4 4"
    code, out, _ = run("construct", "spectrum", "--n", "4", "--json")
    assert json.loads(out)["n"] == 4
    assert run("construct", "regular", "--n", "5", "--k", "3")[0] == 1
    assert run("construct", "near-regular", "--n", "6", "--k", "3", "--l", "2")[0] == 2
    assert run("construct", "regular", "--n", "5")[0] == 2


def test_usage_errors_exit_2():
    assert run()[0] == 2
    assert run("psi", "--n", "3", "--bogus")[0] == 2
    assert run("psi", "--n", "3", "--alpha", "a,b")[0] == 2
    assert run("psi", "--n", "3", "--p", "0.5,0.5", "--alpha", "0,0")[0] == 2
    assert run("fit")[0] == 2


def test_malformed_file_reports_line(tmp_path):
    p = tmp_path / "bad.edges"
    p.write_text("3 2\n0 1\n0 1\n")
    code, _, err = run("stats", "--graph", str(p))
    assert code == 1 and "bad.edges:3" in err


def test_experiment_greedy_bound_csv(tmp_path):
    path = tmp_path / "greedy.csv"
    code, out, _ = run("experiment", "fig4", "--nmax", "200", "--step", "10", "--csv", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and out == ""
    assert lines[0] == "n,count,ratio" and len(lines) == 21


def test_experiment_outputs_are_byte_stable():
    args = ("experiment", "prop5", "--n", "15,25", "--trials", "30", "--seed", "4", "--c", "0.3")
    assert run(*args)[1] == run(*args, "--workers", "3")[1]


def test_experiment_tables():
    for name, extra in [
        ("tn-bidegree", ()),
        ("er-theta", ("--n", "3")),
        ("singularity", ("--n", "4")),
        ("nu-dominance", ("--n", "4")),
        ("h-sequence", ()),
        ("lambda", ("--k", "100")),
        ("band-bound", ("--n", "3", "--trials", "2")),
        ("prop6", ("--n", "20", "--trials", "5")),
    ]:
        code, out, err = run("experiment", name, "--csv", "-", *extra)
        assert code == 0, (name, err)
        assert len(out.splitlines()) >= 2


def test_help_lists_csv_columns():
    code, out, _ = run("experiment", "--help")
    assert code == 0
