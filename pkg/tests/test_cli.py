import json
import subprocess
import sys

import pytest

from ainftate.cli import main
from ainftate.presentation import data_path, parse_presentation


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tate_z2(capsys):
    code, out, _ = run(capsys, "tate", "--example", "z2", "--kmax", "6", "--lmax", "6")
    assert code == 0
    rep = json.loads(out)
    assert rep["betti"] and all(r["dimension"] == 1 for r in rep["betti"])
    assert rep["checks"]["norm"]["ok"] and rep["checks"]["les"]["ok"]
    assert rep["policy"] == {"k_max": 6, "l_max": 6}
    assert rep["command"] == ["tate", "--example", "z2", "--kmax", "6", "--lmax", "6"]


def test_trees_n4(capsys):
    code, out, _ = run(capsys, "trees", "--n", "4")
    rep = json.loads(out)
    assert code == 0
    assert [r["count"] for r in rep["counts"]] == [5, 5, 1]
    assert rep["total"] == 11
    assert rep["checks"]["pentagon"]["ok"]


def test_borel_trivial(capsys):
    code, out, _ = run(capsys, "borel", "--example", "trivial", "--kmax", "3")
    rep = json.loads(out)
    assert code == 0
    assert {r["degree"]: r["dimension"] for r in rep["betti"]} == {0: 1, 1: 0, 2: 0}
    assert rep["trusted_range"] == [None, 2]


def test_csv_column_order(capsys):
    code, out, _ = run(capsys, "coborel", "--example", "z2", "--lmax", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["degree,dimension,trusted", "-3,1,true", "-2,1,true", "-1,1,true", "0,1,true"]


def test_untrusted_degrees_are_an_error(capsys):
    code, out, err = run(capsys, "borel", "--example", "z2", "--kmax", "4", "--degrees", "2..5")
    assert code == 2 and out == ""
    assert "trusted range" in err


def test_negative_degree_ranges(capsys):
    code, out, _ = run(capsys, "coborel", "--example", "z3", "--lmax", "4", "--degrees=-2..0")
    assert code == 0
    assert [r["degree"] for r in json.loads(out)["betti"]] == [-2, -1, 0]


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["borel", "--example", "z2", "--bogus"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
    assert run(capsys, "borel")[0] == 2
    assert run(capsys, "borel", "--example", "z2", "--algebra", "x.json")[0] == 2
    assert run(capsys, "borel", "--example", "z2", "--kmax", "0")[0] == 2


def test_verify_reports_failures_with_exit_1(tmp_path, capsys):
    doc = json.loads(data_path("z2.json").read_text())
    del doc["terms"][0]
    f = tmp_path / "broken.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--algebra", str(f))
    rep = json.loads(out)
    assert code == 1
    assert not rep["checks"]["algebra"]["ok"] and rep["checks"]["algebra"]["witness"]
    # other commands refuse the same file as bad input
    code, _, err = run(capsys, "borel", "--algebra", str(f))
    assert code == 2 and "relations fail" in err


def test_verify_shipped(capsys):
    code, out, _ = run(capsys, "verify", "--module", str(data_path("z2_trivial_module.json")))
    assert code == 0
    assert all(c["ok"] for c in json.loads(out)["checks"].values())


def test_dualize_output_reparses(tmp_path, capsys):
    code, out, _ = run(capsys, "dualize", "--algebra", str(data_path("z3.json")))
    assert code == 0
    f = tmp_path / "dual.json"
    f.write_text(out)
    assert parse_presentation(f).kind == "coalgebra"


def test_out_flag_and_determinism(tmp_path, capsys):
    out = tmp_path / "report.json"
    reports = []
    for _ in range(2):
        assert run(capsys, "twisted-borel", "--example", "z2", "--kmax", "3", "--lmax", "5", "--out", str(out)) == (0, "", "")
        reports.append(out.read_bytes())
    assert reports[0] == reports[1]
    assert "wall_clock_s" not in json.loads(reports[0])


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "borel", "--example", "z2", "--kmax", "2", "--timing")
    assert "wall_clock_s" in json.loads(out)


def test_les_check(capsys):
    code, out, _ = run(capsys, "les-check", "--example", "z3", "--kmax", "2", "--lmax", "6")
    rep = json.loads(out)
    assert code == 0
    statuses = {n["status"] for n in rep["nodes"]}
    assert "pass" in statuses and "fail" not in statuses


def test_check_d2_can_be_disabled(capsys):
    _, out, _ = run(capsys, "borel", "--example", "z2", "--kmax", "3", "--no-check-d2")
    assert json.loads(out)["checks"]["d2"] == {"ok": True, "skipped": True}


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ainftate.cli", "trees", "--n", "3", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["codim,count", "0,2", "1,1"]
