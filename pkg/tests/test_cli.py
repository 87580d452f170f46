from __future__ import annotations

import json

import pytest

from matchlab.cli import EXIT_GUARD, EXIT_INVALID, EXIT_OK, EXIT_UNDECIDED, EXIT_VERIFY, main
from matchlab.constructions import Variant, build_variant
from matchlab.hypercore import Hypergraph, write_hypergraph


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out or "null")


def test_gen_family_writes_one_file_per_member(tmp_path, capsys):
    code, out = run_json(capsys, ["gen", "--family", "ext", "--n", "8", "--k", "4", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert len(out["files"]) == 8 and len(list(tmp_path.iterdir())) == 8


def test_gen_single_construction_to_stdout(capsys):
    assert main(["gen", "--construction", "complete", "--n", "5", "--k", "4"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "5 4 5" and len(lines) == 6


def test_thresholds_reports_tight_value(capsys):
    code, out = run_json(capsys, ["thresholds", "--n", "28", "--k", "4", "--l", "2"])
    assert code == EXIT_OK
    assert out["value"] == 160
    assert out["argmax"] == {"variant": "Bbar", "a_size": 17, "t": 3}
    assert out["closed_form"]["floor"] == 160


def test_thresholds_guard(capsys):
    assert main(["thresholds", "--n", "200", "--k", "4", "--l", "2"]) == EXIT_GUARD


def test_solve_paths(tmp_path, capsys):
    fam = tmp_path / "fam.hg"
    write_hypergraph(build_variant(12, 4, range(5), Variant.BBAR), fam)
    code, out = run_json(capsys, ["solve", str(fam)])
    assert code == EXIT_OK and out["result"] == "certificate" and out["edge_parity"] == "even"

    full = tmp_path / "full.hg"
    write_hypergraph(Hypergraph.complete(8, 4), full)
    code, out = run_json(capsys, ["solve", str(full)])
    assert code == EXIT_OK and out["result"] == "matching" and len(out["edges"]) == 2
    assert main(["solve", str(full), "--budget", "1"]) == EXIT_UNDECIDED


def test_solve_extremal(tmp_path, capsys):
    hg, part = tmp_path / "b.hg", tmp_path / "a.txt"
    write_hypergraph(build_variant(16, 4, range(8), Variant.BBAR), hg)
    part.write_text(" ".join(map(str, range(8))) + "\n")
    code, out = run_json(capsys, ["solve", str(hg), "--extremal", "--partition", str(part), "--variant", "Bbar"])
    assert code == EXIT_OK and out["ok"] and len(out["matching"]) == 4
    write_hypergraph(build_variant(16, 4, range(7), Variant.BBAR), hg)
    part.write_text(" ".join(map(str, range(7))) + "\n")
    code, out = run_json(capsys, ["solve", str(hg), "--extremal", "--partition", str(part), "--variant", "Bbar"])
    assert code == EXIT_UNDECIDED and out["failure"]["step"] == "2"


def test_analyze_with_goodness(tmp_path, capsys):
    hg, part = tmp_path / "b.hg", tmp_path / "a.txt"
    write_hypergraph(build_variant(12, 4, range(5), Variant.BBAR), hg)
    part.write_text("0 1 2 3 4\n")
    code, out = run_json(capsys, ["analyze", str(hg), "--partition", str(part), "--variant", "Bbar"])
    assert code == EXIT_OK
    assert out["min_degree"]["2"] == 20 and out["goodness"]["missing_reference_edges"] == 0


def test_absorb_requires_seed_and_reports_bounds(capsys):
    assert main(["absorb", "--n", "16", "--k", "4", "--xi", "0.1"]) == EXIT_INVALID
    capsys.readouterr()
    code, out = run_json(capsys, ["absorb", "--n", "16", "--k", "4", "--xi", "0.1", "--seed", "0"])
    assert code == EXIT_VERIFY and out["failure"]["bound"] == "hit bound"


def test_structure_and_census(tmp_path, capsys):
    hg = tmp_path / "k.hg"
    write_hypergraph(Hypergraph.complete(8, 4), hg)
    col = tmp_path / "c.txt"
    lines = ["6 1"] + [f"{i} {j} {'R' if (i < 3) != (j < 3) else 'B'}" for i in range(6) for j in range(i + 1, 6)]
    col.write_text("\n".join(lines) + "\n")
    code, out = run_json(capsys, ["structure", "--input", str(hg), "--coloring", str(col)])
    assert code == EXIT_OK
    assert out["aux_graph"] == {"N": 28, "edges": 210}
    assert out["census"]["c3_red"] == 0 and out["census"]["c3_blue"] == 2


def test_scan_table(capsys):
    code, out = run_json(capsys, ["scan", "--ns", "12", "16", "--k", "4", "--l", "2"])
    assert code == EXIT_OK and [row["n"] for row in out["rows"]] == [12, 16]
    assert all(row["value"] <= row["closed_form_floor"] for row in out["rows"])


def test_invalid_inputs(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.hg")]) == EXIT_INVALID
    bad = tmp_path / "bad.hg"
    bad.write_text("4 2 1\n0 7\n")
    assert main(["analyze", str(bad)]) == EXIT_INVALID
    assert main(["gen", "--n", "8", "--k", "1"]) == EXIT_INVALID


def test_text_output_is_sorted_and_deterministic(capsys):
    main(["thresholds", "--n", "12", "--k", "4", "--l", "3"])
    first = capsys.readouterr().out
    main(["thresholds", "--n", "12", "--k", "4", "--l", "3"])
    assert capsys.readouterr().out == first
    keys = [line.split(":")[0].split(".")[0] for line in first.splitlines()]
    assert keys == sorted(keys)


def test_unknown_command_exits_with_usage():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
