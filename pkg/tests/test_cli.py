"""Group documents, run configurations and the command-line front end."""
import json
import subprocess
import sys

import pytest

from growthcrit.cli import run_command
from growthcrit.config import ConfigError, RunConfig, parse_group_config
from growthcrit.enumeration import enumerate_ball
from growthcrit.specnorm import analytic_bound

from oracles import free_mod_a_return

F2_DOC = {"kind": "free", "rank": 2}


@pytest.fixture
def f2_file(tmp_path):
    p = tmp_path / "f2.json"
    p.write_text(json.dumps(F2_DOC))
    return p


def cli(*args, env=None, cwd=None):
    return subprocess.run([sys.executable, "-m", "growthcrit", *map(str, args)],
                          capture_output=True, text=True, env=env, cwd=cwd)


# -- parse_group_config --------------------------------------------------------------

def test_parse_free():
    G = parse_group_config(json.dumps(F2_DOC))
    assert len(G.generators) == 4 and G.has_conjugacy_oracle
    assert analytic_bound(G) is not None


def test_parse_heisenberg():
    G = parse_group_config('{"kind": "heisenberg"}')
    assert G.labels == ["x", "x^-1", "y", "y^-1"] and G.known_center


def test_parse_direct_product():
    G = parse_group_config({"kind": "direct_product",
                            "factors": [F2_DOC, {"kind": "abelian", "rank": 1}]})
    assert len(G.generators) == 6
    assert enumerate_ball(G, 1).size() == 7


def test_parse_matrix_and_free_product():
    M = parse_group_config({"kind": "matrix", "generators": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]})
    assert len(M.generators) == 4
    P = parse_group_config({"kind": "free_product", "factors": [F2_DOC, {"kind": "abelian", "rank": 1}]})
    assert len(P.generators) == 6


@pytest.mark.parametrize("doc,path", [
    ("{not json", "$"),
    ({"kind": "torus"}, "$.kind"),
    ({"kind": "free"}, "$.rank"),
    ({"kind": "free", "rank": 0}, "$.rank"),
    ({"kind": "free", "rank": 2, "colour": 1}, "$.colour"),
    ({"kind": "direct_product", "factors": [F2_DOC, {"kind": "free", "rank": "2"}]}, "$.factors[1].rank"),
    ({"kind": "matrix", "generators": [[[1, 0.5], [0, 1]]]}, "$.generators[0]"),
    ({"kind": "abelian", "rank": 1, "torsion": [1]}, "$.torsion"),
])
def test_config_errors_carry_path(doc, path):
    with pytest.raises(ConfigError) as info:
        parse_group_config(doc if isinstance(doc, str) else json.dumps(doc))
    assert info.value.path == path


def test_run_config_validation_and_round_trip():
    rc = RunConfig("balls", "f2.json", F2_DOC, {"radius": 2, "budget": 10}, "csv", ["balls"])
    assert json.loads(rc.to_json()) == rc.to_dict()
    with pytest.raises(ConfigError):
        RunConfig("balls", "f2.json", F2_DOC, {"radius": -1}, "csv")
    with pytest.raises(ConfigError):
        RunConfig("walk", "f2.json", F2_DOC, {"samples": 0}, "csv")


# -- commands ------------------------------------------------------------------------

def test_balls_row(f2_file):
    p = cli("balls", "--group", f2_file, "--radius", 2)
    assert p.returncode == 0
    assert p.stdout == "n,count,exactness\n0,1,exact\n1,5,exact\n2,17,exact\n"


def test_walk_exact_kappa4(f2_file):
    p = cli("walk", "--group", f2_file, "--subgroup", "centralizer:a", "--steps", 4, "--mode", "exact")
    assert p.returncode == 0
    k4 = free_mod_a_return(4)
    assert f"4,{k4.numerator},{k4.denominator}" in p.stdout.splitlines()


def test_walk_mc_records_seed(f2_file, tmp_path):
    out = tmp_path / "mc.csv"
    p = cli("walk", "--group", f2_file, "--subgroup", "centralizer:a", "--steps", 3, "--mode", "mc",
            "--samples", 2000, "--seed", 9, "--out", out)
    assert p.returncode == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "n,kappa_mc,stderr,samples,seed"
    assert rows[1].endswith(",2000,9")
    side = json.loads((tmp_path / "mc.csv.run.json").read_text())
    assert side["params"]["seed"] == 9 and side["params"]["samples"] == 2000


def test_missing_group_file(tmp_path):
    out = tmp_path / "x.csv"
    p = cli("balls", "--group", tmp_path / "nope.json", "--radius", 2, "--out", out)
    assert p.returncode == 2 and not out.exists()
    assert "cannot read group file" in p.stderr


def test_bad_config_exit_code(tmp_path):
    g = tmp_path / "bad.json"
    g.write_text('{"kind": "free", "rank": -2}')
    assert run_command(["balls", "--group", str(g), "--radius", "1"]) == 2


def test_usage_errors(f2_file):
    assert run_command(["balls", "--group", str(f2_file)]) == 2
    assert run_command(["frobnicate"]) == 2
    assert run_command(["balls", "--group", str(f2_file), "--radius", "1", "--threads", "0"]) == 2
    assert run_command(["check", "trace", "--group", str(f2_file)]) == 2


def test_budget_exhaustion_writes_partial(f2_file, tmp_path):
    out = tmp_path / "b.csv"
    p = cli("balls", "--group", f2_file, "--radius", 8, "--budget", 100, "--out", out)
    assert p.returncode == 3
    assert out.read_text().splitlines()[-1] == "3,53,exact"
    side = json.loads((tmp_path / "b.csv.run.json").read_text())
    assert side["partial"] is True


def test_other_csv_commands(f2_file, tmp_path):
    p = cli("growth", "--group", f2_file, "--subset", "centralizer:a", "--radius", 3)
    assert p.stdout.splitlines()[-1] == "3,7,exact"
    p = cli("conjclass", "--group", f2_file, "--word", "a", "--radius", 3)
    assert p.stdout.splitlines()[-1] == "3,3,exact"
    dump = tmp_path / "g.txt"
    p = cli("schreier", "--group", f2_file, "--subgroup", "centralizer:a", "--radius", 2, "--dump", dump)
    assert p.stdout.splitlines()[-1] == "2,9,exact"
    assert dump.read_text().startswith("0,0,e\n")
    p = cli("rho", "--group", f2_file, "--radius", 1)
    assert p.returncode == 0
    assert p.stdout.splitlines()[0] == "n,rho_lower,rho_upper,lower_witness,upper_source"


def test_check_report_embeds_run_config(f2_file):
    p = cli("check", "trace", "--group", f2_file, "--word", "a", "--n-max", 9)
    assert p.returncode == 0
    doc = json.loads(p.stdout)
    assert doc["verdict"] == "supported"
    rc = doc["run_config"]
    assert rc["command"] == "check" and rc["group"] == F2_DOC
    assert rc["params"]["n_max"] == 9 and rc["params"]["criterion"] == "trace"


def test_check_injections_text(tmp_path):
    g = tmp_path / "h.json"
    g.write_text('{"kind": "heisenberg"}')
    p = cli("check", "injections", "--group", g, "--word", "x", "--n-max", 2, "--format", "text")
    assert p.returncode == 0
    assert p.stdout.count("verdict:   supported") == 2


def test_check_freeness_branch(tmp_path):
    g = tmp_path / "z2.json"
    g.write_text('{"kind": "abelian", "rank": 2}')
    p = cli("check", "freeness", "--group", g, "--word", "t1", "--n-max", 6)
    doc = json.loads(p.stdout)
    assert doc["provenance"]["routing"]["branch"] == "coamenability"


def test_sidecar_rerun_reproduces_csv(f2_file, tmp_path):
    out = tmp_path / "w.csv"
    assert cli("walk", "--group", f2_file, "--subgroup", "centralizer:a", "--steps", 10,
               "--out", out, "--threads", 2).returncode == 0
    side = json.loads((tmp_path / "w.csv.run.json").read_text())
    assert "--threads" not in side["argv"]
    argv = [str(tmp_path / "again.csv") if a == str(out) else a for a in side["argv"]]
    assert argv != side["argv"]
    assert cli(*argv).returncode == 0
    assert (tmp_path / "again.csv").read_bytes() == out.read_bytes()


def test_thread_env_default(f2_file, monkeypatch):
    import os
    env = dict(os.environ, GROWTHCRIT_THREADS="4")
    a = cli("balls", "--group", f2_file, "--radius", 6, env=env)
    b = cli("balls", "--group", f2_file, "--radius", 6)
    assert a.returncode == 0 and a.stdout == b.stdout


def test_csv_line_endings(f2_file, tmp_path):
    out = tmp_path / "b.csv"
    run_command(["balls", "--group", str(f2_file), "--radius", "3", "--out", str(out)])
    data = out.read_bytes()
    assert b"\r" not in data and data.endswith(b"\n")
    data.decode("utf-8")
