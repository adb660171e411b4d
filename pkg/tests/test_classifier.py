import pytest

from lcllab.catalog import (
    all_red,
    copy_input,
    identity_swap,
    mark_kth,
    maximal_independent_set,
    three_coloring,
    three_coloring_of_blocks,
    trivially_true,
    two_coloring,
)
from lcllab.classifier import ComplexityClass, classify
from lcllab.problem import NormalLcl


@pytest.mark.parametrize(
    "builder, expected",
    [
        (two_coloring, ComplexityClass.GLOBAL),
        (mark_kth, ComplexityClass.GLOBAL),
        (three_coloring, ComplexityClass.LOGSTAR),
        (maximal_independent_set, ComplexityClass.LOGSTAR),
        (all_red, ComplexityClass.O1),
        (trivially_true, ComplexityClass.O1),
        (identity_swap, ComplexityClass.GLOBAL),
        (three_coloring_of_blocks, ComplexityClass.BOREL),
        (copy_input, ComplexityClass.O1),
    ],
)
def test_reference_problems(builder, expected):
    assert classify(builder()).complexity is expected


def test_logstar_report_carries_the_ergodic_certificate():
    data = classify(three_coloring()).to_dict()
    assert data["class"] == "LOGSTAR"
    assert data["mixing"] is False
    assert data["no_input_class"] == {"class": "LOGSTAR", "state": "1", "k0": 6}


def test_global_report_carries_a_witness():
    data = classify(two_coloring()).to_dict()
    assert data["mixing"] is True
    assert data["witness"]["anchor"] == "u"
    assert data["witness"]["generators"][0]["block"] == "uu"
    assert data["unsolvable_instance"] is False


def test_unsolvable_problem_is_global():
    report = classify(NormalLcl("stuck", ("u",), ("x",), frozenset()))
    assert report.complexity is ComplexityClass.GLOBAL
    assert report.to_dict()["unsolvable_instance"] is True


def test_constant_round_upgrade_names_its_rule():
    report = classify(copy_input())
    assert report.certified_radius == 0
    rule = report.to_dict(full=True)["window_rule"]
    assert rule["table"] == [{"view": ["a"], "output": "a"}, {"view": ["b"], "output": "b"}]
    assert "window_rule" not in report.to_dict()


def test_borel_problem_has_no_certified_radius():
    report = classify(three_coloring_of_blocks())
    assert report.certified_radius is None
    assert report.to_dict()["certified_radius"] is None


def test_no_upgrade_when_certification_radius_is_zero():
    assert classify(three_coloring_of_blocks(), certify_radius=0).complexity is ComplexityClass.BOREL


def test_large_alphabets_skip_the_cross_check():
    report = classify(trivially_true(1, 7))
    assert report.complexity is ComplexityClass.O1
    assert report.mixing is None
    assert report.to_dict()["mixing"] is None


def test_report_key_order():
    keys = list(classify(two_coloring()).to_dict(full=True))
    assert keys[:3] == ["problem", "mixing", "class"]
    assert keys[-1] == "summary"
