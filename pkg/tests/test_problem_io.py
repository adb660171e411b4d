import pytest

from lcllab import catalog
from lcllab.exceptions import DuplicateLabelError, ProblemSyntaxError, UnknownLabelError
from lcllab.problem import GeneralLcl, NormalLcl, Topology
from lcllab.problem_io import (
    load_family,
    load_instance,
    load_problem,
    parse_instance,
    parse_problem,
    serialize_instance,
    serialize_problem,
)


@pytest.mark.parametrize(
    "filename, builder",
    [
        ("two_coloring.lcl", catalog.two_coloring),
        ("three_coloring.lcl", catalog.three_coloring),
        ("mark_third.lcl", catalog.mark_kth),
        ("all_red.lcl", catalog.all_red),
        ("mis.lcl", catalog.maximal_independent_set),
        ("trivial.lcl", catalog.trivially_true),
        ("identity_swap.lcl", catalog.identity_swap),
        ("three_coloring_of_blocks.lcl", catalog.three_coloring_of_blocks),
        ("two_coloring_r1.lcl", catalog.general_two_coloring),
        ("three_coloring_r1.lcl", catalog.general_three_coloring),
    ],
)
def test_bundled_problems_match_the_catalog(problems_dir, filename, builder):
    assert load_problem(problems_dir / filename) == builder()


def test_radius_clause_selects_general_form(problems_dir):
    assert isinstance(load_problem(problems_dir / "two_coloring_r1.lcl"), GeneralLcl)
    assert isinstance(load_problem(problems_dir / "two_coloring.lcl"), NormalLcl)


def test_serialized_problem_parses_back():
    p = catalog.three_coloring_of_blocks()
    assert parse_problem(serialize_problem(p)) == p


def test_unknown_label_reports_line_and_column():
    text = "problem p\ninputs: u\noutputs: a b\nallow: (u,u | a,c)\n"
    with pytest.raises(UnknownLabelError) as info:
        parse_problem(text)
    assert (info.value.line, info.value.column) == (4, 17)


def test_radius_problem_labels_cannot_contain_window_separators():
    text = "problem p\ninputs: u\noutputs: W a:b\nradius: 0\nwindow: (u,W)\n"
    with pytest.raises(ProblemSyntaxError) as info:
        parse_problem(text)
    assert (info.value.line, info.value.column) == (3, 12)


def test_normal_form_labels_may_contain_window_separators():
    p = parse_problem("problem n\ninputs: u\noutputs: u:W/u:B\nallow: (u,u | u:W/u:B,u:W/u:B)\n")
    assert p.sigma_out == ("u:W/u:B",)
    assert p.allowed == {("u", "u", "u:W/u:B", "u:W/u:B")}


def test_duplicate_label_in_file():
    with pytest.raises(DuplicateLabelError) as info:
        parse_problem("problem p\ninputs: u\noutputs: a a\n")
    assert info.value.line == 3


@pytest.mark.parametrize(
    "text",
    [
        "",
        "problem p\ninputs: u\n",
        "problem p\ninputs: u\noutputs: a\nwindow: (u,a) (u,a) (u,a)\n",
        "problem p\ninputs: u\noutputs: a\nradius: 1\nwindow: (u,a)\n",
        "problem p\ninputs: u\noutputs: a\nallow: (u,u | a)\n",
        "problem p\ninputs: u\noutputs: a\ncolor: red\n",
        "problem p\nallow: (u,u | a,a)\ninputs: u\noutputs: a\n",
    ],
)
def test_malformed_problem_files(text):
    with pytest.raises(ProblemSyntaxError):
        parse_problem(text)


def test_comments_and_blank_lines_are_ignored():
    p = parse_problem("# header\nproblem p\n\ninputs: u   # one letter\noutputs: x\nallow: (u,u | x,x)\n")
    assert p.allows("u", "u", "x", "x")


def test_compact_instance_inputs(problems_dir):
    inst = load_instance(problems_dir / "cycle4.inst")
    assert inst.topology is Topology.CYCLE
    assert inst.inputs == ("u",) * 4
    assert inst.ids is None


def test_space_separated_instance_inputs(problems_dir):
    inst = load_instance(problems_dir / "blocks9.inst")
    assert inst.inputs == ("L", "∅", "∅", "L", "∅", "L", "∅", "∅", "∅")


def test_instance_with_ids_and_seed():
    inst = parse_instance("instance path 3\ninputs: a b a\nids: 5 1 9\nseed: 42\n")
    assert inst.topology is Topology.PATH
    assert inst.ids == (5, 1, 9)
    assert inst.rng_seed == 42
    assert parse_instance(serialize_instance(inst)) == inst


@pytest.mark.parametrize(
    "text",
    [
        "instance cycle 3\ninputs: u u\n",
        "instance cycle 2\ninputs: uu\nids: 1 1\n",
        "instance cycle 2\ninputs: uu\nids: 1 x\n",
        "instance torus 2\ninputs: uu\n",
        "instance cycle 2\n",
        "instance cycle 2\ninputs: uu\nseed: -3\n",
    ],
)
def test_malformed_instance_files(text):
    with pytest.raises(ProblemSyntaxError):
        parse_instance(text)


def test_family_file(problems_dir):
    family = load_family(problems_dir / "chain3.fam")
    assert family.anchor == "u"
    assert family.lengths == (2, 3, 4)


def test_missing_file_raises_os_error(tmp_path):
    with pytest.raises(OSError):
        load_problem(tmp_path / "absent.lcl")
