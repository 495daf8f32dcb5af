import json
import pathlib
import subprocess
import sys

import pytest

from projent.cli import main

INST = pathlib.Path(__file__).resolve().parents[1] / "instances"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, [json.loads(line) for line in out.out.splitlines()], out


def test_family_sharp(capsys):
    code, (rec,), _ = run(capsys, "family", "sharp", INST / "six_members.json")
    assert code == 0
    assert rec["payload"]["sharp"]["sets"] == [[1, 2], [1, 2, 3], [1, 2, 3], [1, 2, 3, 4, 5, 6]]
    assert rec["payload"]["chain"] is True
    assert set(rec) == {"command", "inputs", "verdict", "payload", "seed", "tol", "version"}


def test_family_check_and_compress(capsys):
    code, (rec,), _ = run(capsys, "family", "check", "--k", 2, INST / "pairs3.json")
    assert code == 0 and rec["payload"]["uniform"] is True
    code, (rec,), _ = run(capsys, "family", "compress", "--i", 1, "--j", 2, INST / "two.json")
    assert code == 0
    assert rec["payload"]["potential"][1] > rec["payload"]["potential"][0]
    code, (rec,), _ = run(
        capsys, "family", "check", INST / "gen1_a.json", "--against", INST / "gen1_b.json"
    )
    assert rec["payload"]["relation"] == "strictly compresses"


def test_family_nested_pair_is_an_error(capsys):
    code, (rec,), out = run(capsys, "family", "compress", "--i", 1, "--j", 1, INST / "two.json")
    assert code == 2
    assert rec["verdict"] == "error" and rec["error"] == "NestedPair"
    assert "error" in out.err


@pytest.mark.parametrize(
    "argv",
    [
        ("entropy", "shearer", "--k", 2, INST / "d3.json", INST / "pairs3.json"),
        ("entropy", "mt", "--k", 2, INST / "d3.json", INST / "pairs3.json"),
        ("entropy", "gen2", INST / "d3.json", INST / "pairs3.json"),
        ("entropy", "gen1", INST / "d4.json", INST / "gen1_a.json", INST / "gen1_b.json"),
        ("entropy", "submod", "--a", "1,2", "--b", "2,3", INST / "d3.json"),
        ("entropy", "box", INST / "d4.json"),
    ],
)
def test_entropy_commands_hold(capsys, argv):
    code, (rec,), _ = run(capsys, *argv)
    assert code == 0 and rec["verdict"] == "holds"


def test_entropy_box_reports_every_subset(capsys):
    _, (rec,), _ = run(capsys, "entropy", "box", INST / "d4.json")
    assert rec["payload"]["checks"] == 16
    assert rec["payload"]["failures"] == []


def test_entropy_usage_errors(capsys):
    assert run(capsys, "entropy", "shearer", INST / "d3.json", INST / "pairs3.json")[0] == 2
    assert run(capsys, "entropy", "gen2", INST / "d3.json")[0] == 2
    assert run(capsys, "entropy", "gen1", INST / "d4.json", INST / "gen1_b.json", INST / "gen1_a.json")[0] == 2


def test_lattice_commands(capsys):
    code, (rec,), _ = run(capsys, "lattice", "project", "--a", "1,2", INST / "five_points.json")
    assert code == 0 and rec["payload"]["size"] == 3
    code, (rec,), _ = run(
        capsys, "lattice", "cover", "--k", 2, INST / "five_points.json", INST / "pairs3.json"
    )
    assert code == 0 and (rec["payload"]["lhs"], rec["payload"]["rhs"]) == (25, 36)
    code, (rec,), _ = run(capsys, "lattice", "fig2")
    assert code == 0 and rec["verdict"] == "counterexample-confirmed"
    assert (rec["payload"]["sharp_product"], rec["payload"]["family_product"]) == (10, 9)


def test_sumset_cd_reproduces_z13(capsys):
    code, (rec,), out = run(
        capsys, "sumset", "cd", "--group", INST / "z13.json", INST / "s135.json", INST / "pairs3.json"
    )
    assert code == 1
    cover = rec["payload"]["additive_cover"]
    assert (cover["lhs"], cover["rhs"]) == (22, 24)
    assert rec["payload"]["cauchy_davenport"]["verdict"] == "holds"
    assert "22 < 24" in out.err


def test_sumset_cover_and_marking(capsys):
    code, (rec,), _ = run(capsys, "sumset", "cover", "--k", 2, INST / "int3.json", INST / "pairs3.json")
    assert code == 0 and rec["payload"]["box_feasible"]
    code, (rec,), _ = run(capsys, "sumset", "marking", "--k", 2, INST / "int3.json", INST / "pairs3.json")
    assert code == 0 and all(rec["payload"]["audit"].values())
    code, (rec,), _ = run(
        capsys, "sumset", "marking", "--k", 2, INST / "s135.json", INST / "pairs3.json"
    )
    assert code == 2 and rec["error"] == "UnorderedContext"


def test_sumset_gymr_equality(capsys):
    code, (rec,), out = run(capsys, "sumset", "gymr", INST / "gymr_equality.json")
    assert code == 0
    assert rec["payload"]["equality"] and rec["payload"]["lhs"] == 36
    assert "36 = 36" in out.err


def test_search_budget_zero(capsys):
    code, recs, _ = run(capsys, "search", "6.2", "--budget", 0)
    assert code == 0
    assert recs == [
        {
            "by_group": {},
            "errors": 0,
            "feasible": 0,
            "infeasible": 0,
            "instances": 0,
            "seed": None,
            "summary": True,
            "tol": 1e-9,
            "unverified_certificates": 0,
            "version": recs[0]["version"],
        }
    ]


def test_search_torsion_free_catalog(capsys):
    code, recs, _ = run(
        capsys, "search", "6.2", "--groups", INST / "abelian_catalog.json", "--seed", 3, "--samples", 20
    )
    assert code == 0
    assert recs[-1]["instances"] == 40 and recs[-1]["infeasible"] == 0


def test_search_finds_torsion_counterexamples(capsys):
    code, recs, _ = run(capsys, "search", "6.2", "--seed", 1, "--samples", 30, "--json")
    assert code == 1
    bad = [r for r in recs if r.get("feasible") is False]
    assert bad and all(r["verified"] for r in bad)
    assert all("group_spec" in r["instance"] for r in bad)


def test_output_is_byte_deterministic(capsys):
    argv = ("search", "6.1", "--seed", 5, "--samples", 5, "--budget", 30, "--json")
    main([str(a) for a in argv])
    first = capsys.readouterr().out
    main([str(a) for a in argv])
    assert capsys.readouterr().out == first


def test_bad_json_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3,\n "sets": [1, 2')
    code, (rec,), _ = run(capsys, "family", "sharp", bad)
    assert code == 2 and f"{bad}:2:" in rec["message"]


def test_missing_file_and_unknown_command(capsys):
    assert run(capsys, "family", "sharp", "/nonexistent.json")[0] == 2
    assert main(["nope"]) == 2
    capsys.readouterr()


def test_json_flag_silences_stderr(capsys):
    _, _, out = run(capsys, "lattice", "fig2", "--json")
    assert out.err == ""


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "projent", "family", "check", "--k", "2", str(INST / "pairs3.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["uniform"] is True
