import pytest

from lcllab import LclLab
from lcllab.catalog import (
    copy_input,
    general_three_coloring,
    general_two_coloring,
    identity_swap,
    three_coloring,
    two_coloring,
)
from lcllab.config import RunConfig
from lcllab.exceptions import InstanceError, SimulationError
from lcllab.generators import BlockFamily
from lcllab.problem import LabeledInstance
from lcllab.problem_io import parse_instance, parse_problem


@pytest.fixture
def lab():
    return LclLab(RunConfig(command="test", seed=5))


def test_classify_general_problem_through_its_normal_form(lab):
    data = lab.classify(general_two_coloring())
    assert data["class"] == "GLOBAL"
    assert data["normalized"] is True


def test_classify_wide_normal_form_without_cross_check(lab):
    data = lab.classify(general_three_coloring())
    assert data["class"] == "LOGSTAR"
    assert data["mixing"] is None


def test_normalize_payload(lab):
    data = lab.normalize(general_two_coloring())
    assert data["outputs"] == 2
    assert data["allowed"] == 2
    assert parse_problem(data["normal_form"]) == lab.normal_form(general_two_coloring())


def test_solve_projects_back_to_original_outputs(lab):
    data = lab.solve(general_two_coloring(), LabeledInstance.cycle("uuuu"))
    assert data["sat"] is True
    assert data["coloring"] == ["B", "W", "B", "W"]
    assert data["violations"] == []
    assert data["solutions"] == 2


def test_solve_unsatisfiable(lab):
    data = lab.solve(two_coloring(), LabeledInstance.cycle("uuuuu"))
    assert data["sat"] is False
    assert data["coloring"] is None
    assert data["solutions"] == 0


def test_random_instances_are_seeded(lab):
    a = lab.instance_for(copy_input(), 40)
    b = lab.instance_for(copy_input(), 40)
    assert a == b
    assert len(set(a.ids)) == 40
    assert a.rng_seed == 5


def test_simulate_ergodic(lab):
    data = lab.simulate(three_coloring(), "ergodic", 300)
    assert data["violations"] == []
    assert data["k0"] == 6
    assert data["problem"] == "three_coloring"


def test_simulate_ruling_without_problem(lab):
    data = lab.simulate(None, "ruling", 120, k=3)
    assert data["violations"] == []
    assert data["problem"] is None
    assert data["rounds_used"] <= data["round_budget"]


def test_simulate_window_rule(lab):
    data = lab.simulate(copy_input(), "view", 50, rule="window", t=0)
    assert data["violations"] == []


def test_simulate_errors(lab):
    with pytest.raises(SimulationError):
        lab.simulate(None, "view", 10)
    with pytest.raises(SimulationError):
        lab.simulate(two_coloring(), "view", 10, rule="window", t=0)
    with pytest.raises(SimulationError):
        lab.simulate(two_coloring(), "teleport", 10)


def test_locality_search(lab):
    data = lab.probe(two_coloring(), [LabeledInstance.cycle("uuuu")], 0)
    assert data["rows"] == [{"t": 0, "instance": 0, "n": 4, "views": 1, "best_violations": 4}]


def test_generate_superblock(lab):
    inst, data = lab.generate_superblock(["I", "S"], 2, 3)
    assert data["n"] == 6
    assert parse_instance(data["instance"]) == inst
    assert lab.solve(identity_swap(), inst)["sat"] is False
    with pytest.raises(InstanceError):
        lab.generate_superblock(["I"], 2, 3)


def test_generate_chain(lab):
    family = BlockFamily("parity", "u", (("u", "u"), ("u", "u", "u")))
    inst, data = lab.generate_chain(family, 50)
    assert data["kind"] == "chain"
    assert data["seed"] == 5
    assert parse_instance(data["instance"]) == inst
