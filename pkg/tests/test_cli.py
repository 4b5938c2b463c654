import json
import subprocess
import sys

import pytest

from oadiff import arpa, csp, designs
from oadiff.cli import main
from reference_arrays import ARPA_432, DS_RHO_E_332, OA_9_3_3_2


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def oa_file(tmp_path):
    p = tmp_path / "oa.txt"
    p.write_text(designs.format_array(designs.make_array(3, OA_9_3_3_2)))
    return str(p)


@pytest.fixture
def instance_file(tmp_path):
    p = tmp_path / "inst.json"
    p.write_text(csp.instance_to_json(csp.gen_random(3, 2, 5, 7, 4, kind="rational")))
    return str(p)


# ---------------------------------------------------------------- verify

def test_verify_oa(capsys, oa_file):
    code, out, _ = run(capsys, "verify", "--oa", oa_file, "--strength", "2")
    assert code == 0 and "ok = yes" in out and "R = 9" in out


def test_verify_oa_failure_prints_witness(capsys, oa_file):
    code, out, _ = run(capsys, "verify", "--oa", oa_file, "--strength", "3")
    assert code == 1 and out.startswith("FAIL") and "witness" in out


def test_verify_ds(capsys, tmp_path):
    p = tmp_path / "ds.txt"
    p.write_text(designs.format_array(designs.make_array(3, DS_RHO_E_332)))
    code, out, _ = run(capsys, "verify", "--ds", str(p), "--strength", "2")
    assert code == 0 and "object = ds" in out


def test_verify_published_arpa(capsys, tmp_path):
    p = tmp_path / "pair.txt"
    p.write_text(arpa.format_pair(arpa.make_pair(4, *ARPA_432)))
    code, out, _ = run(capsys, "verify", "--arpa", str(p), "4", "3", "2")
    assert code == 0 and "ratio = 1/3" in out
    code, out, _ = run(capsys, "verify", "--arpa", str(p), "4", "2", "2")
    assert code == 1 and "FAIL" in out


def test_verify_usage_errors(capsys, tmp_path, oa_file):
    assert run(capsys, "verify", "--oa", oa_file)[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "--oa", str(tmp_path / "missing.txt"), "--strength", "2")[0] == 2
    assert run(capsys, "verify", "--arpa", oa_file, "x", "3", "2")[0] == 2


def test_malformed_file_is_input_error(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("this is not an array\n")
    code, _, err = run(capsys, "verify", "--oa", str(p), "--strength", "2")
    assert code == 2 and "malformed" in err


def test_unknown_flag_and_jobs(capsys):
    assert run(capsys, "search", "--gamma", "3", "2", "2", "--frobnicate")[0] == 2
    assert run(capsys, "--jobs", "0", "search", "--gamma", "3", "2", "2")[0] == 2
    assert run(capsys, "teleport")[0] == 2


# ---------------------------------------------------------------- search

def test_search_gamma(capsys):
    code, out, _ = run(capsys, "search", "--gamma", "3", "2", "2")
    assert code == 0 and out.splitlines()[0] == "1/4"


@pytest.mark.parametrize("flag,args,want", [
    ("--rho", ("4", "2", "2"), "1/6"), ("--rho-E", ("4", "3", "2"), "1/5"),
    ("--F", ("3", "3", "2"), "9"), ("--E", ("3", "3", "2"), "3"),
    ("--gamma-E", ("4", "3", "2"), "1/2"), ("--delta", ("3", "2", "2"), "1/4"),
])
def test_search_values(capsys, flag, args, want):
    code, out, _ = run(capsys, "search", flag, *args)
    assert code == 0 and out.splitlines()[0] == want


def test_search_row_counts(capsys):
    code, out, _ = run(capsys, "search", "--R-min", "4", "2", "2")
    assert code == 0 and "R = 12" in out and "R_star = 2" in out


def test_search_witness_round_trip(capsys, tmp_path):
    w = tmp_path / "w.txt"
    dump = tmp_path / "m.lp"
    code, out, _ = run(capsys, "search", "--gamma", "4", "3", "2", "--witness", str(w), "--dump-lp", str(dump))
    assert code == 0 and dump.read_text().startswith("MODEL")
    code, out, _ = run(capsys, "verify", "--arpa", str(w), "4", "3", "2")
    assert code == 0 and "ratio = 1/3" in out
    o = tmp_path / "o.txt"
    assert run(capsys, "search", "--rho", "3", "3", "2", "--witness", str(o))[0] == 0
    text = o.read_text()
    M = designs.parse_array(text)
    assert designs.is_orthogonal_array(M, 2)


def test_search_budget_is_usage_error(capsys):
    assert run(capsys, "search", "--rho", "21", "2", "2")[0] == 2


# ---------------------------------------------------------------- builders

def test_arpa_build_then_verify(capsys, tmp_path):
    p = tmp_path / "pair.txt"
    code, out, _ = run(capsys, "arpa", "--build", "6", "2", "--out", str(p))
    assert code == 0 and "R = 25" in out
    code, out, _ = run(capsys, "verify", "--arpa", str(p), "6", "2", "2")
    assert code == 0 and "R = 25" in out and "R_star = 1" in out


def test_arpa_auto_round_trip(capsys, tmp_path):
    p = tmp_path / "pair.txt"
    assert run(capsys, "arpa", "--auto", "5", "3", "2", "--out", str(p))[0] == 0
    code, out, _ = run(capsys, "verify", "--arpa", str(p), "5", "3", "2")
    assert code == 0 and "ratio = 1/9" in out


def test_cpa_build_then_verify(capsys, tmp_path):
    p = tmp_path / "cpa.txt"
    assert run(capsys, "cpa", "--build", "5", "3", "--out", str(p))[0] == 0
    code, out, _ = run(capsys, "verify", "--bar-cpa", str(p), "5", "3", "3")
    assert code == 0 and "R_star = 1" in out


def test_gen_round_trip(capsys, tmp_path):
    p = tmp_path / "g.json"
    assert run(capsys, "gen", "--family", "random", "--q", "3", "--k", "2", "--n", "5", "--m", "6",
               "--seed", "9", "--out", str(p))[0] == 0
    assert csp.instance_from_json(p.read_text()) == csp.gen_random(3, 2, 5, 6, 9)
    code, out, _ = run(capsys, "gen", "--family", "tildeI", "--n", "2")
    assert code == 0 and json.loads(out)["n"] == 4
    assert run(capsys, "gen", "--family", "I", "--q", "2")[0] == 2


# ---------------------------------------------------------------- instance verbs

def test_csp_verb(capsys, instance_file):
    code, out, _ = run(capsys, "csp", "--instance", instance_file, "--oracle", "--coloring",
                       "--condexp", "--eval", "0,1,2,0,1")
    assert code == 0
    for key in ("opt = ", "wor = ", "avd = ", "greedy_nu = ", "condexp_value = ", "value = "):
        assert key in out


def test_csp_verb_bad_vector(capsys, instance_file):
    assert run(capsys, "csp", "--instance", instance_file, "--eval", "0,1,x")[0] == 2
    assert run(capsys, "csp", "--instance", instance_file, "--eval", "0,1")[0] == 2


def test_reduce_verb(capsys, instance_file):
    code, out, _ = run(capsys, "reduce", "--instance", instance_file, "--p", "2", "--oracle")
    assert code == 0 and "certified_ratio = 1/4" in out and "achieved_ratio" in out
    code, out, _ = run(capsys, "reduce", "--instance", instance_file, "--p", "2", "--base", "ls")
    assert code == 0 and "certified_ratio = unknown" in out


def test_ball_and_identity_verbs(capsys, instance_file):
    code, out, _ = run(capsys, "ball", "--instance", instance_file, "--center", "0,0,0,0,0",
                       "--radius", "2", "--oracle")
    assert code == 0 and "ratio_bound = " in out
    code, out, _ = run(capsys, "identity", "--instance", instance_file, "--x", "0,0,0,0,0",
                       "--xstar", "1,2,1,2,0")
    assert code == 0 and "ok = yes" in out and "kappa = 4" in out
    assert run(capsys, "identity", "--instance", instance_file, "--x", "0,0,0,0,0", "--xstar", "1,0,0,0,0")[0] == 2


# ---------------------------------------------------------------- output contract

def test_json_schema(capsys):
    code, out, _ = run(capsys, "--json", "search", "--gamma", "3", "2", "2")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1 and doc["status"] == "ok" and doc["value"] == "1/4"


def test_json_failure_status(capsys, oa_file):
    code, out, _ = run(capsys, "--json", "verify", "--oa", oa_file, "--strength", "3")
    assert code == 1 and json.loads(out)["status"] == "fail"


def test_deterministic_and_jobs_independent(capsys, instance_file):
    argv = ["reduce", "--instance", instance_file, "--p", "2", "--oracle"]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first
    assert run(capsys, "--jobs", "4", *argv) == first


def test_tables_subset(capsys):
    code, out, _ = run(capsys, "tables", "--only", "gamma_E")
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "mismatches = 0"
    assert len(lines) == 7 and all(line.startswith("ok") for line in lines[:-1])


def test_module_entry_point(oa_file):
    res = subprocess.run([sys.executable, "-m", "oadiff", "verify", "--oa", oa_file, "--strength", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "ok = yes" in res.stdout
