"""End-to-end CLI contracts: files, stdout summaries, exit codes."""

import json

import pytest

from extparab import polytope
from extparab.cli import main
from extparab.extension import ConstructionParams, build


def run_cli(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code


def test_build_d4_writes_all_formats(tmp_path, capsys):
    prefix = str(tmp_path / "q4")
    assert run_cli(["build", "--d", "4", "--out", prefix]) == 0
    out = capsys.readouterr().out
    assert "8 facets, 16 vertices" in out
    ine = (tmp_path / "q4.ine").read_text()
    assert "8 5 rational" in ine
    ext_text = (tmp_path / "q4.ext").read_text()
    assert "16 5 rational" in ext_text
    sidecar = json.loads((tmp_path / "q4.json").read_text())
    assert sidecar["M"] == 16
    assert sidecar["phi_prime"] == ["0", "1/25", "0", "1"]


def test_build_round_trip(tmp_path):
    prefix = str(tmp_path / "q6")
    assert run_cli(["build", "--d", "6", "--out", prefix, "--format", "ine"]) == 0
    parsed = polytope.hrep_from_ine((tmp_path / "q6.ine").read_text())
    assert parsed == build(ConstructionParams(n=24, d=6)).poly


def test_build_base_case(tmp_path):
    prefix = str(tmp_path / "q2")
    assert run_cli(["build", "--d", "2", "--n", "8", "--out", prefix]) == 0
    ine = (tmp_path / "q2.ine").read_text()
    assert "4 3 rational" in ine


def test_build_rejects_odd_dimension(tmp_path):
    assert run_cli(["build", "--d", "3", "--out", str(tmp_path / "x")]) == 2


def test_verify_passes(tmp_path, capsys):
    report_path = str(tmp_path / "report.json")
    assert run_cli(["verify", "--d", "4", "--out", report_path]) == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["ok"]
    assert doc["construction"]["ok"]
    assert all(e["ok"] for e in doc["normal_equivalence"])
    assert all(e["ok"] for e in doc["stage_vertex_checks"])
    out = capsys.readouterr().out
    assert "PASS facet_count" in out


def test_verify_d8_passes():
    assert run_cli(["verify", "--d", "8"]) == 0


def test_verify_base_case_passes():
    assert run_cli(["verify", "--d", "2", "--n", "8"]) == 0


def test_verify_detects_phi_weight_fault(capsys):
    assert run_cli(["verify", "--d", "4", "--inject-fault", "phi-weight"]) == 1
    out = capsys.readouterr().out
    assert "FAIL projection_identity" in out


def test_verify_detects_vertex_fault():
    assert run_cli(["verify", "--d", "4", "--inject-fault", "vertex"]) == 1


def test_run_first_rule(tmp_path, capsys):
    prefix = str(tmp_path / "run4")
    assert run_cli(["run", "--d", "4", "--rule", "first", "--out", prefix]) == 0
    out = capsys.readouterr().out
    assert "visited 16 vertices in 15 moves" in out
    doc = json.loads((tmp_path / "run4.trace.json").read_text())
    assert doc["terminated"] == "Optimal"
    assert doc["instance"] == {"n": 16, "d": 4, "M": 16, "c": "9/10"}
    assert [s["t"] for s in doc["steps"]] == list(range(16))
    plot = (tmp_path / "run4.plot.csv").read_text().strip().splitlines()
    assert plot[0] == "t,phi,phi_prime,f"
    assert len(plot) == 17


def test_run_random_seed_matches_first(tmp_path):
    a = str(tmp_path / "a")
    b = str(tmp_path / "b")
    assert run_cli(["run", "--d", "4", "--rule", "first", "--out", a]) == 0
    assert run_cli(["run", "--d", "4", "--rule", "random", "--seed", "7", "--out", b]) == 0
    doc_a = json.loads((tmp_path / "a.trace.json").read_text())
    doc_b = json.loads((tmp_path / "b.trace.json").read_text())
    assert [s["vertex"] for s in doc_a["steps"]] == [s["vertex"] for s in doc_b["steps"]]


def test_run_unknown_rule_is_usage_error(tmp_path, capsys):
    code = run_cli(["run", "--d", "4", "--rule", "nosuch", "--out", str(tmp_path / "x")])
    capsys.readouterr()
    assert code == 2


def test_scan_small(capsys):
    assert run_cli(["scan", "--M", "16"]) == 0
    out = capsys.readouterr().out
    assert "0 violations / 240 pairs" in out


def test_scan_refuses_beyond_cap(capsys):
    assert run_cli(["scan", "--M", "100000"]) == 2
    err = capsys.readouterr().err
    assert "cap" in err


def test_scan_report_file(tmp_path):
    path = str(tmp_path / "scan.json")
    assert run_cli(["scan", "--M", "4", "--out", path]) == 0
    doc = json.loads((tmp_path / "scan.json").read_text())
    assert doc == {"M": 4, "pairs_checked": 12, "violations": [], "ok": True}


def test_report_table(tmp_path, capsys):
    prefix = str(tmp_path / "rep")
    code = run_cli(
        [
            "report",
            "--d",
            "4",
            "--rules",
            "first,last,random",
            "--seeds",
            "1..3",
            "--out",
            prefix,
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "vertices_visited=16" in out
    csv_lines = (tmp_path / "rep_d4.csv").read_text().strip().splitlines()
    assert csv_lines[0] == "rule,seed,vertices_visited,edge_moves,loop_iterations,wall_time_ms"
    assert len(csv_lines) == 1 + 2 + 3  # first, last, random x 3 seeds


def test_report_detects_objective_fault(capsys):
    code = run_cli(
        ["report", "--d", "4", "--rules", "first", "--seeds", "1", "--inject-fault", "objective-c"]
    )
    capsys.readouterr()
    assert code == 1
