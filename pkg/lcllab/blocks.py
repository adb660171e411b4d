"""Block types: relations on the output alphabet realized by input strings."""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import BlockError, DimensionMismatchError
from .logger import logger
from .problem import NormalLcl, format_block


@dataclass(frozen=True, order=True)
class Relation:
    """Binary relation on an alphabet of `size` letters, stored as a row-major bit string."""

    size: int
    bits: str

    def __post_init__(self) -> None:
        if len(self.bits) != self.size * self.size or set(self.bits) - {"0", "1"}:
            raise DimensionMismatchError(f"bit string of length {len(self.bits)} is not a {self.size}x{self.size} relation")

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Relation":
        matrix = np.asarray(matrix, dtype=bool)
        rows, cols = matrix.shape
        if rows != cols:
            raise DimensionMismatchError(f"relation matrix must be square, got {rows}x{cols}")
        return cls(rows, "".join("1" if v else "0" for v in matrix.ravel()))

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Tuple[int, int]]) -> "Relation":
        matrix = np.zeros((size, size), dtype=bool)
        for a, b in pairs:
            matrix[a, b] = True
        return cls.from_matrix(matrix)

    @classmethod
    def identity(cls, size: int) -> "Relation":
        return cls.from_matrix(np.eye(size, dtype=bool))

    @classmethod
    def empty(cls, size: int) -> "Relation":
        return cls(size, "0" * size * size)

    @classmethod
    def full(cls, size: int) -> "Relation":
        return cls(size, "1" * size * size)

    @property
    def matrix(self) -> np.ndarray:
        return np.frombuffer(self.bits.encode("ascii"), dtype=np.uint8).reshape(self.size, self.size) == ord("1")

    @property
    def is_empty(self) -> bool:
        return "1" not in self.bits

    def pairs(self) -> List[Tuple[int, int]]:
        return [divmod(i, self.size) for i, bit in enumerate(self.bits) if bit == "1"]

    def labeled_pairs(self, labels: Sequence[str]) -> List[Tuple[str, str]]:
        return [(labels[a], labels[b]) for a, b in self.pairs()]


# a block type is the relation connecting entry and exit outputs across a block
BlockType = Relation


@dataclass(frozen=True)
class EdgeRelation:
    left_input: str
    right_input: str
    rel: Relation


def compose(r1: Relation, r2: Relation) -> Relation:
    """(a, c) is in the result iff (a, b) in r1 and (b, c) in r2 for some b."""
    if r1.size != r2.size:
        raise DimensionMismatchError(f"cannot compose relations over {r1.size} and {r2.size} letters")
    product = r1.matrix.astype(np.uint8) @ r2.matrix.astype(np.uint8)
    return Relation.from_matrix(product > 0)


def edge_relation(p: NormalLcl, a: str, b: str) -> EdgeRelation:
    return EdgeRelation(a, b, Relation.from_matrix(p.edge_matrix(a, b)))


def _check_block(p: NormalLcl, block: Sequence[str]) -> None:
    if len(block) < 2:
        raise BlockError(f"a block needs at least two letters, got {len(block)}")
    if block[0] != block[-1]:
        raise BlockError(f"block {format_block(block)} does not start and end with the same letter")
    for letter in block:
        p.require_input(letter)


def block_type(p: NormalLcl, block: Sequence[str]) -> Relation:
    _check_block(p, block)
    acc = np.eye(len(p.sigma_out), dtype=np.uint8)
    for a, b in zip(block, block[1:]):
        acc = (acc @ p.edge_matrix(a, b).astype(np.uint8) > 0).astype(np.uint8)
    return Relation.from_matrix(acc)


@dataclass(frozen=True)
class TypeAtlas:
    anchor: str
    achievable: Dict[Relation, Tuple[str, ...]] = field(hash=False)
    empty_type_reachable: bool = False
    empty_witness: Optional[Tuple[str, ...]] = None
    states_explored: int = 0

    @property
    def max_witness_length(self) -> int:
        return max((len(w) for w in self.achievable.values()), default=0)

    def to_dict(self) -> Dict[str, object]:
        return {
            "anchor": self.anchor,
            "types": [
                {"relation": rel.bits, "witness": format_block(w)}
                for rel, w in self.achievable.items()
            ],
            "empty_type_reachable": self.empty_type_reachable,
            "empty_witness": None if self.empty_witness is None else format_block(self.empty_witness),
        }


def enumerate_block_types(p: NormalLcl, sigma: str) -> TypeAtlas:
    """Breadth-first closure over (last letter, accumulated relation) states.

    A type is recorded on every transition that lands on `sigma`, so the
    identity reached again after one or more edges counts. Expanding letters in
    canonical order makes each recorded witness the shortest, then
    lexicographically least, block of its type.
    """
    p.require_input(sigma)
    k = len(p.sigma_out)
    start = np.eye(k, dtype=np.uint8)
    edges = {
        (a, b): p.edge_matrix(a, b).astype(np.uint8)
        for a in p.sigma_in for b in p.sigma_in
    }

    visited = {(sigma, start.tobytes())}
    queue = deque([(sigma, start, (sigma,))])
    achievable: Dict[Relation, Tuple[str, ...]] = {}

    while queue:
        letter, acc, path = queue.popleft()
        for nxt in p.sigma_in:
            step = (acc @ edges[letter, nxt] > 0).astype(np.uint8)
            witness = path + (nxt,)
            if nxt == sigma:
                rel = Relation.from_matrix(step)
                if rel not in achievable:
                    achievable[rel] = witness
            key = (nxt, step.tobytes())
            if key not in visited:
                visited.add(key)
                queue.append((nxt, step, witness))

    empty = Relation.empty(k)
    logger.debug(
        f"atlas for '{p.name}' at {sigma}: {len(achievable)} types over {len(visited)} states"
    )
    return TypeAtlas(
        anchor=sigma,
        achievable=achievable,
        empty_type_reachable=empty in achievable,
        empty_witness=achievable.get(empty),
        states_explored=len(visited),
    )
