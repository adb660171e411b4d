import numpy as np
import pytest

from lcllab.catalog import three_coloring, two_coloring
from lcllab.exceptions import BlockError, InstanceError
from lcllab.generators import (
    BlockFamily,
    MarkovChainSpec,
    sample_chain,
    split_at_marks,
    superblock_instance,
)
from lcllab.problem_io import load_family
from lcllab.randomness import make_rng
from lcllab.subpartition import Subpartition


@pytest.fixture
def chain3(problems_dir):
    return load_family(problems_dir / "chain3.fam")


def test_chain_states_and_transitions(chain3):
    spec = MarkovChainSpec(chain3)
    assert len(spec.states) == 1 + 2 + 3
    assert spec.transitions((1, 0)) == [((1, 1), 1.0)]
    exits = spec.transitions((1, 1))
    assert [state for state, _ in exits] == [(0, 0), (1, 0), (2, 0)]
    assert sum(prob for _, prob in exits) == pytest.approx(1.0)


def test_sample_is_a_concatenation_of_family_blocks(chain3):
    sample = sample_chain(MarkovChainSpec(chain3), 100, seed=7)
    assert 97 < sample.instance.n <= 100
    assert sample.instance.is_cycle
    assert sample.instance.rng_seed == 7
    pieces = split_at_marks(sample, chain3)
    assert len(pieces) == len(sample.blocks_used)
    assert [chain3.blocks.index(piece) for piece in pieces] == list(sample.blocks_used)
    assert sum(flag for _, flag in sample.marks) == len(sample.blocks_used)


def test_samples_are_reproducible(chain3):
    spec = MarkovChainSpec(chain3)
    assert sample_chain(spec, 80, seed=3) == sample_chain(spec, 80, seed=3)


def test_sample_shorter_than_a_block(chain3):
    with pytest.raises(InstanceError):
        sample_chain(MarkovChainSpec(chain3), 3, seed=0)


def test_sample_to_dict(chain3):
    data = sample_chain(MarkovChainSpec(chain3), 20, seed=1).to_dict()
    assert set(data) == {"n", "blocks_used", "marks"}
    assert len(data["marks"]) == data["n"]


@pytest.mark.parametrize(
    "blocks",
    [(), (("u",),), (("u", "v", "w"),)],
)
def test_invalid_families(blocks):
    with pytest.raises(BlockError):
        BlockFamily("bad", "u", blocks)


def test_permutation_blocks_are_checked():
    family = BlockFamily("parity", "u", (("u", "u"), ("u", "u", "u")))
    family.verify_permutation_blocks(
        two_coloring(), Subpartition(("W", "B"), ((0,), (1,)), ((0, 1),), frozenset())
    )
    singletons = Subpartition(("1", "2", "3"), ((0,), (1,), (2,)), ((0, 1, 2),), frozenset())
    with pytest.raises(BlockError):
        family.verify_permutation_blocks(three_coloring(), singletons)


def test_superblock_layout():
    inst = superblock_instance(("I", "S"), 3, 2)
    assert inst.inputs == ("S", "I", "I", "S", "I", "I")
    assert inst.is_cycle


@pytest.mark.parametrize("i_length, m", [(0, 2), (2, 1)])
def test_superblock_arguments(i_length, m):
    with pytest.raises(InstanceError):
        superblock_instance(("I", "S"), i_length, m)


def test_transition_rows_are_distributions(chain3):
    spec = MarkovChainSpec(chain3)
    for state in spec.states:
        rows = spec.transitions(state)
        assert all(target in spec.states for target, _ in rows)
        assert sum(prob for _, prob in rows) == pytest.approx(1.0)


def test_blocks_are_drawn_uniformly(chain3):
    spec = MarkovChainSpec(chain3)
    counts = np.zeros(3)
    for seed in range(10):
        used = sample_chain(spec, 10**4, seed).blocks_used
        counts += np.bincount(used, minlength=3)
    assert np.all(np.abs(counts / counts.sum() - 1 / 3) < 0.05 / 3), counts


@pytest.mark.parametrize("state", [(0, 0), (1, 1), (2, 2)])
def test_block_exits_step_uniformly(chain3, state):
    spec = MarkovChainSpec(chain3)
    rng = make_rng(4, state[0])
    steps = 10**5
    counts = np.zeros(3)
    for _ in range(steps):
        target = spec.step(state, rng)
        assert target[1] == 0
        counts[target[0]] += 1
    sigma = np.sqrt(steps * (1 / 3) * (2 / 3))
    assert np.all(np.abs(counts - steps / 3) < 4 * sigma), counts
