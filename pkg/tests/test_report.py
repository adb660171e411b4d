import json

import pytest

from lcllab.config import VERSION
from lcllab.exceptions import ReportError
from lcllab.report import build_report, compare_reports, load_report, render_report, replay, write_report


def test_key_order():
    report = build_report("classify", {"problem": "p", "class": "O1"}, ["classify", "p.lcl"], 12)
    assert list(report) == ["command", "problem", "class", "argv", "version", "wallclock_ms"]
    assert report["version"] == VERSION


def test_payload_cannot_shadow_report_fields():
    with pytest.raises(ReportError):
        build_report("classify", {"command": "x"}, [], 0)


def test_rendering_keeps_unicode():
    text = render_report(build_report("solve", {"coloring": ["∅"]}, [], 0))
    assert "∅" in text
    assert text.endswith("\n")


def test_write_and_load(tmp_path):
    path = tmp_path / "report.json"
    report = build_report("classify", {"class": "GLOBAL"}, ["classify", "x.lcl"], 3)
    write_report(report, str(path))
    assert load_report(str(path)) == report


def test_write_to_stdout(capsys):
    write_report(build_report("check", {"passed": True}, ["check"], 0))
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_write_to_missing_directory(tmp_path):
    with pytest.raises(ReportError):
        write_report(build_report("check", {}, [], 0), str(tmp_path / "no" / "such" / "dir.json"))


def test_load_rejects_bad_files(tmp_path):
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json", encoding="utf-8")
    with pytest.raises(ReportError):
        load_report(str(garbage))
    partial = tmp_path / "partial.json"
    partial.write_text('{"command": "classify"}', encoding="utf-8")
    with pytest.raises(ReportError):
        load_report(str(partial))
    with pytest.raises(ReportError):
        load_report(str(tmp_path / "absent.json"))


def test_compare_ignores_wallclock():
    a = build_report("classify", {"class": "O1"}, ["classify"], 1)
    b = build_report("classify", {"class": "O1"}, ["classify"], 999)
    c = build_report("classify", {"class": "BOREL"}, ["classify"], 1)
    assert compare_reports(a, b) == []
    assert compare_reports(a, c) == ["class"]


def test_replay_reruns_recorded_argv(tmp_path):
    path = tmp_path / "report.json"
    recorded = build_report("classify", {"class": "O1"}, ["classify", "p.lcl"], 5)
    write_report(recorded, str(path))
    seen = []

    def rerun(argv):
        seen.append(argv)
        return build_report("classify", {"class": "O1"}, argv, 50)

    assert replay(str(path), rerun) == []
    assert seen == [["classify", "p.lcl"]]


@pytest.mark.parametrize("key", ["argv", "version", "wallclock_ms"])
def test_trailing_fields_are_reserved_too(key):
    with pytest.raises(ReportError):
        build_report("classify", {key: 1}, [], 0)
