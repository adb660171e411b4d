"""Adversarial inputs: Markov-chain concatenations of blocks and superblock cycles."""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .blocks import block_type
from .exceptions import BlockError, InstanceError
from .logger import logger
from .mixing import permutations_of_block
from .problem import LabeledInstance, NormalLcl, format_block
from .randomness import CHAIN_STREAM, make_rng
from .subpartition import Subpartition

# (block index, 1 if the node starts that block else 0)
BoundaryMark = Tuple[int, int]
ChainState = Tuple[int, int]  # (block index, position inside the block)


@dataclass(frozen=True)
class BlockFamily:
    name: str
    anchor: str
    blocks: Tuple[Tuple[str, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        if not self.blocks:
            raise BlockError(f"family '{self.name}' has no blocks")
        for block in self.blocks:
            if len(block) < 2:
                raise BlockError(f"block {format_block(block)} is shorter than two letters")
            if block[0] != self.anchor or block[-1] != self.anchor:
                raise BlockError(f"block {format_block(block)} does not start and end with {self.anchor}")

    @property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def verify_permutation_blocks(self, p: NormalLcl, sp: Subpartition) -> None:
        """Require every block to be a permutation block of `p` on subpartition `sp`."""
        for block in self.blocks:
            if not permutations_of_block(block_type(p, block), sp):
                raise BlockError(f"block {format_block(block)} is not a permutation block")


@dataclass(frozen=True)
class MarkovChainSpec:
    """Chain over (block, position) states; the last letter of a block is the
    first letter of the next one, so block i contributes len(block) - 1 states."""

    family: BlockFamily

    @property
    def states(self) -> List[ChainState]:
        return [(i, j) for i, length in enumerate(self.family.lengths) for j in range(length - 1)]

    def letter(self, state: ChainState) -> str:
        i, j = state
        return self.family.blocks[i][j]

    def transitions(self, state: ChainState) -> List[Tuple[ChainState, float]]:
        i, j = state
        if j < self.family.lengths[i] - 2:
            return [((i, j + 1), 1.0)]
        count = len(self.family.blocks)
        return [((k, 0), 1.0 / count) for k in range(count)]

    def step(self, state: ChainState, rng: np.random.Generator) -> ChainState:
        i, j = state
        if j < self.family.lengths[i] - 2:
            return (i, j + 1)
        return (int(rng.integers(len(self.family.blocks))), 0)


@dataclass(frozen=True)
class ChainSample:
    instance: LabeledInstance
    marks: Tuple[BoundaryMark, ...]
    blocks_used: Tuple[int, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.instance.n,
            "blocks_used": list(self.blocks_used),
            "marks": [list(m) for m in self.marks],
        }


def sample_chain(spec: MarkovChainSpec, n: int, seed: int) -> ChainSample:
    """Walk the chain from a uniform state and keep the complete blocks that fit in n nodes.

    The partial block the walk starts in is discarded, so the emitted cycle
    is an exact concatenation of family blocks, seam included.
    """
    lengths = spec.family.lengths
    if n < max(lengths):
        raise InstanceError(f"n={n} is smaller than the longest block ({max(lengths)})")
    rng = make_rng(seed, CHAIN_STREAM)
    states = spec.states
    state = states[int(rng.integers(len(states)))]
    while state[1] != 0:
        state = spec.step(state, rng)

    letters: List[str] = []
    marks: List[BoundaryMark] = []
    used: List[int] = []
    while len(letters) + lengths[state[0]] - 1 <= n:
        block = state[0]
        used.append(block)
        for _ in range(lengths[block] - 1):
            letters.append(spec.letter(state))
            marks.append((block, 1 if state[1] == 0 else 0))
            state = spec.step(state, rng)

    logger.debug(f"sampled {len(used)} blocks, {len(letters)} of {n} nodes")
    return ChainSample(LabeledInstance.cycle(letters, rng_seed=seed), tuple(marks), tuple(used))


def split_at_marks(sample: ChainSample, family: BlockFamily) -> List[Tuple[str, ...]]:
    """Cut a sampled cycle back into blocks at its start marks."""
    starts = [i for i, (_, flag) in enumerate(sample.marks) if flag]
    letters = sample.instance.inputs
    pieces = []
    for a, b in zip(starts, starts[1:] + [len(letters)]):
        pieces.append(letters[a:b] + (family.anchor,))
    return pieces


def superblock_instance(perm_labels: Sequence[str], i_length: int, m: int) -> LabeledInstance:
    """Cycle of m superblocks of i_length nodes.

    Inputs sit on the right endpoint of each edge: the first node of every
    superblock carries the swap letter, every other node the identity letter.
    """
    identity, swap = perm_labels
    if i_length < 1:
        raise InstanceError(f"superblock length must be at least 1, got {i_length}")
    if m < 2:
        raise InstanceError(f"need at least 2 superblocks, got {m}")
    letters = [swap if pos % i_length == 0 else identity for pos in range(m * i_length)]
    return LabeledInstance.cycle(letters)
