import json
import subprocess
import sys

import pytest

from bigrr.cli import run
from bigrr.construct import build_group, dihedral
from bigrr.groups import format_cayley_table


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_search_example(capsys):
    code, out, _ = _run(capsys, "search", "--cyclic", "4", "--subgroup", "0", "--mode", "drr", "--trials", "10000", "--seed", "1")
    assert code == 0
    [rep] = json.loads(out)
    assert rep["status"] == "Found" and rep["found_set"] in ([1], [3]) and rep["label"] == '{"cyclic":4}'


def test_bounds_crossover(capsys):
    code, out, _ = _run(capsys, "bounds", "--crossover")
    assert code == 0 and out == "640\n"


def test_bounds_values(capsys):
    code, out, _ = _run(capsys, "bounds", "--n", "8", "638", "640")
    assert code == 0
    assert [b["sign"] for b in json.loads(out)] == [-1, -1, 1]
    assert _run(capsys, "bounds", "--n", "7")[0] == 1


def test_tables_small(capsys):
    code, out, _ = _run(capsys, "tables", "--max-order", "8", "--format", "text", "--seed", "1")
    assert code == 0 and out.endswith("confirmed: True\n")
    code, out, _ = _run(capsys, "tables", "--max-order", "6", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "table,key,name,subgroup,mode,conclusion,listed,agrees"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["search", "--cyclic", "4"],
        ["search", "--subgroup", "0"],
        ["search", "--cyclic", "4", "--subgroup", "5"],
        ["search", "--cyclic", "4", "--subgroup", "0", "--trials", "0"],
        ["search", "--cyclic", "4", "--subgroup", "0", "--seed", str(2**64)],
        ["search", "--spec", "{bad", "--subgroup", "0"],
        ["search", "--spec", '{"cyclic": "x"}', "--subgroup", "0"],
        ["group", "--catalog", "99#1"],
        ["group", "--table-file", "/nonexistent/file.txt"],
        ["search", "--cyclic", "4", "--dihedral", "3", "--subgroup", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 1 and err.startswith("bigrr:")


def test_cap_errors(capsys):
    assert _run(capsys, "count", "--catalog", "64#267", "--subgroup", "0")[0] == 2
    assert _run(capsys, "search", "--cyclic", "130", "--subgroup", "0")[0] == 2
    assert _run(capsys, "verify", "--catalog", "32#1", "--subgroup", "0")[0] == 2


def test_group_and_subgroups(capsys, tmp_path):
    code, out, _ = _run(capsys, "group", "--dicyclic", "2")
    info = json.loads(out)
    assert code == 0 and info["order"] == 8 and info["element_orders"] == {"1": 1, "2": 1, "4": 6}
    code, out, _ = _run(capsys, "subgroups", "--abelian", "2", "2")
    assert code == 0 and len(json.loads(out)["subgroups"]) == 3
    p = tmp_path / "t.txt"
    assert _run(capsys, "group", "--gendihedral", "3", "--print-table", "--out", str(p))[0] == 0
    assert p.read_text().startswith("order 6\n")


def test_table_file_input(capsys, tmp_path):
    p = tmp_path / "d4.txt"
    p.write_text(format_cayley_table(build_group(dihedral(4))))
    code, out, _ = _run(capsys, "count", "--table-file", str(p), "--all")
    reps = json.loads(out)
    assert code == 0 and len(reps) == 3 and all(r["label"] == "D4" for r in reps)


def test_obstruct_and_verify(capsys):
    code, out, _ = _run(capsys, "obstruct", "--catalog", "16#8", "--all", "--oracle")
    pairs = json.loads(out)["pairs"]
    assert code == 0 and all(p["oracle_agrees"] for p in pairs)
    assert [p["condition"] for p in pairs] == ["Cond1", "Cond2", None]
    assert pairs[0]["automorphism"] is not None and pairs[2]["automorphism"] is None
    code, out, _ = _run(capsys, "verify", "--cyclic", "4", "--subgroup", "0")
    assert code == 0 and json.loads(out)["pairs"][0]["ok"]


def test_csv_output(capsys, tmp_path):
    p = tmp_path / "r.csv"
    code, _, _ = _run(capsys, "count", "--spec", '{"dihedral": 5}', "--all", "--format", "csv", "--out", str(p))
    lines = p.read_text().splitlines()
    assert code == 0 and lines[0] == "group,label,subgroup,mode,status,trials,seed,found_set"
    assert lines[1].split(",")[4] == "ExhaustedNone"


def test_determinism_across_workers(tmp_path, capsys):
    outs = []
    for w in ("1", "4"):
        p = tmp_path / f"s{w}.json"
        run(["search", "--catalog", "16#13", "--all", "--trials", "300", "--seed", "77", "--workers", w, "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "bigrr.cli", "bounds", "--n", "8"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)[0]["sign"] == -1
