import json
import subprocess
import sys
from pathlib import Path

import pytest

from lcllab.cli import main
from lcllab.problem_io import load_instance

ROOT = Path(__file__).resolve().parent.parent


def _run(argv, out):
    code = main([*argv, "--out", str(out)])
    return code, json.loads(out.read_text(encoding="utf-8"))


def test_classify_writes_a_report(problems_dir, tmp_path):
    code, report = _run(["classify", str(problems_dir / "two_coloring.lcl")], tmp_path / "r.json")
    assert code == 0
    assert report["command"] == "classify"
    assert report["class"] == "GLOBAL"
    assert report["witness"]["generators"][0]["block"] == "uu"
    assert list(report)[-3:] == ["argv", "version", "wallclock_ms"]


@pytest.mark.parametrize(
    "filename, expected",
    [
        ("three_coloring.lcl", "LOGSTAR"),
        ("all_red.lcl", "O1"),
        ("mark_third.lcl", "GLOBAL"),
        ("three_coloring_of_blocks.lcl", "BOREL"),
        ("identity_swap.lcl", "GLOBAL"),
    ],
)
def test_classify_bundled_problems(problems_dir, tmp_path, filename, expected):
    code, report = _run(["classify", str(problems_dir / filename)], tmp_path / "r.json")
    assert code == 0
    assert report["class"] == expected


def test_options_before_the_command_are_kept(problems_dir, tmp_path):
    out = tmp_path / "r.json"
    code = main(["--full", "--out", str(out), "classify", str(problems_dir / "two_coloring.lcl")])
    assert code == 0
    assert "summary" in json.loads(out.read_text(encoding="utf-8"))


def test_normalize(problems_dir, tmp_path):
    code, report = _run(["normalize", str(problems_dir / "two_coloring_r1.lcl")], tmp_path / "r.json")
    assert code == 0
    assert report["outputs"] == 2
    assert report["normal_form"].startswith("problem two_coloring_r1\n")


def test_solve(problems_dir, tmp_path):
    problem = str(problems_dir / "two_coloring.lcl")
    code, report = _run(["solve", problem, str(problems_dir / "cycle4.inst")], tmp_path / "even.json")
    assert code == 0
    assert report["coloring"] == ["W", "B", "W", "B"]
    code, report = _run(["solve", problem, str(problems_dir / "cycle5.inst")], tmp_path / "odd.json")
    assert code == 0
    assert report["sat"] is False


def test_simulate_ruling(tmp_path):
    code, report = _run(["simulate", "--alg", "ruling", "--n", "300", "--k", "3", "--seed", "9"], tmp_path / "r.json")
    assert code == 0
    assert report["violations"] == []
    assert set(report["spacing"]) <= {3, 4}


def test_simulate_ergodic(problems_dir, tmp_path):
    code, report = _run(
        ["simulate", str(problems_dir / "mis.lcl"), "--alg", "ergodic", "--n", "400"], tmp_path / "r.json"
    )
    assert code == 0
    assert report["violations"] == []


def test_gen_superblock_emits_an_instance(tmp_path):
    emitted = tmp_path / "hard.inst"
    code, report = _run(["gen", "--superblock", "2", "3", "--emit", str(emitted)], tmp_path / "r.json")
    assert code == 0
    assert report["emitted"] == str(emitted)
    assert load_instance(emitted).inputs == ("S", "I", "S", "I", "S", "I")


def test_gen_chain(problems_dir, tmp_path):
    code, report = _run(["gen", "--family", str(problems_dir / "chain3.fam"), "--n", "60"], tmp_path / "r.json")
    assert code == 0
    assert report["kind"] == "chain"
    assert report["n"] <= 60


def test_missing_file_is_a_usage_error(tmp_path, capsys):
    assert main(["classify", str(tmp_path / "absent.lcl")]) == 2
    assert "File not found" in capsys.readouterr().err


def test_no_command_is_a_usage_error():
    assert main([]) == 2


def test_unknown_option_is_a_usage_error():
    assert main(["--bogus"]) == 2


def test_bad_seed_is_a_usage_error(problems_dir):
    assert main(["classify", str(problems_dir / "all_red.lcl"), "--seed", "-1"]) == 2


def test_domain_error_exits_one(problems_dir, tmp_path):
    bad = tmp_path / "bad.lcl"
    bad.write_text("problem bad\ninputs: u\noutputs: a\nallow: (u,u | a,b)\n", encoding="utf-8")
    assert main(["classify", str(bad)]) == 1


def test_replay_matches(problems_dir, tmp_path):
    recorded = tmp_path / "r.json"
    _run(["classify", str(problems_dir / "three_coloring.lcl")], recorded)
    code, report = _run(["--replay", str(recorded)], tmp_path / "replay.json")
    assert code == 0
    assert report["matches"] is True
    assert report["differences"] == []


def test_replay_detects_changes(problems_dir, tmp_path):
    recorded = tmp_path / "r.json"
    _run(["classify", str(problems_dir / "three_coloring.lcl")], recorded)
    tampered = json.loads(recorded.read_text(encoding="utf-8"))
    tampered["class"] = "O1"
    recorded.write_text(json.dumps(tampered), encoding="utf-8")
    code, report = _run(["--replay", str(recorded)], tmp_path / "replay.json")
    assert code == 1
    assert report["differences"] == ["class"]


@pytest.mark.slow
def test_check_command(tmp_path):
    code, report = _run(["check", "--cases", "5"], tmp_path / "r.json")
    assert report["passed"] is (code == 0)
    assert code == 0


def test_module_entry_point(problems_dir):
    result = subprocess.run(
        [sys.executable, "-m", "lcllab", "classify", str(problems_dir / "all_red.lcl")],
        cwd=ROOT,
        check=True,
        capture_output=True,
        text=True,
    )
    assert json.loads(result.stdout)["class"] == "O1"


def test_unwritable_report_path_exits_one(problems_dir, tmp_path):
    out = tmp_path / "missing" / "r.json"
    assert main(["classify", str(problems_dir / "all_red.lcl"), "--out", str(out)]) == 1
