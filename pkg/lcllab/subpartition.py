from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .config import MAX_OUTPUT_LABELS
from .exceptions import CapExceededError

Partition = Tuple[Tuple[int, ...], ...]
Order = FrozenSet[Tuple[int, int]]


@dataclass(frozen=True)
class Subpartition:
    """A partial equivalence `nabla` on output letters, a coarser full
    partition `pp` and a partial order on the classes of `pp`.

    Letters are referred to by their index in `labels`. `order` holds the
    strict pairs (i, j) meaning pp[i] precedes pp[j]; reflexivity is implied.
    """

    labels: Tuple[str, ...]
    nabla: Partition
    pp: Partition
    order: Order

    @cached_property
    def nabla_of(self) -> Tuple[int, ...]:
        owner = [-1] * len(self.labels)
        for c, members in enumerate(self.nabla):
            for a in members:
                owner[a] = c
        return tuple(owner)

    @cached_property
    def pp_of(self) -> Tuple[int, ...]:
        owner = [-1] * len(self.labels)
        for c, members in enumerate(self.pp):
            for a in members:
                owner[a] = c
        return tuple(owner)

    @cached_property
    def domain(self) -> FrozenSet[int]:
        return frozenset(a for members in self.nabla for a in members)

    @property
    def is_unsolvability_candidate(self) -> bool:
        return not self.nabla and len(self.pp) == 1

    def precedes(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.order

    def nabla_labels(self, c: int) -> Tuple[str, ...]:
        return tuple(self.labels[a] for a in self.nabla[c])

    def to_dict(self) -> Dict[str, object]:
        name = lambda block: [self.labels[a] for a in block]
        return {
            "nabla": [name(c) for c in self.nabla],
            "partition": [name(c) for c in self.pp],
            "order": [[name(self.pp[i]), name(self.pp[j])] for i, j in sorted(self.order)],
        }


def set_partitions(elements: Sequence[int]) -> List[Partition]:
    """All partitions of `elements`, fewest blocks first, then by restricted growth string."""
    elements = tuple(elements)
    found: List[Tuple[int, Partition]] = []

    def grow(i: int, blocks: List[List[int]]) -> None:
        if i == len(elements):
            found.append((len(blocks), tuple(tuple(b) for b in blocks)))
            return
        for block in blocks:
            block.append(elements[i])
            grow(i + 1, blocks)
            block.pop()
        blocks.append([elements[i]])
        grow(i + 1, blocks)
        blocks.pop()

    grow(0, [])
    found.sort(key=lambda item: item[0])
    return [partition for _, partition in found]


@lru_cache(maxsize=None)
def posets(m: int) -> Tuple[Order, ...]:
    """All partial orders on {0..m-1}, as sets of strict pairs.

    Built by adding element m-1 to each order on the first m-1 elements with
    a down-set below it and a disjoint up-set above it.
    """
    if m == 0:
        return (frozenset(),)
    new = m - 1
    result = []
    for base in posets(m - 1):
        below = {x: {a for a, b in base if b == x} for x in range(new)}
        above = {x: {b for a, b in base if a == x} for x in range(new)}
        for down in _subsets(range(new)):
            if any(not below[d] <= down for d in down):
                continue
            rest = [x for x in range(new) if x not in down]
            for up in _subsets(rest):
                if any(not above[u] <= up for u in up):
                    continue
                if any((d, u) not in base for d in down for u in up):
                    continue
                result.append(base | {(d, new) for d in down} | {(new, u) for u in up})
    return tuple(result)


def _subsets(items) -> Iterator[FrozenSet[int]]:
    items = tuple(items)
    for size in range(len(items) + 1):
        for combo in combinations(items, size):
            yield frozenset(combo)


def _is_coarser(pp: Partition, nabla: Partition) -> bool:
    return all(any(set(c) <= set(block) for block in pp) for c in nabla)


def enumerate_subpartitions(labels: Sequence[str], cap: Optional[int] = None) -> Iterator[Subpartition]:
    """Every (nabla, pp, order) in canonical order.

    Domains go by size then lexicographically; the degenerate candidate with
    an empty nabla and the single-block partition comes first.
    """
    labels = tuple(labels)
    cap = MAX_OUTPUT_LABELS if cap is None else cap
    if len(labels) > cap:
        raise CapExceededError(f"{len(labels)} output labels exceed the cap of {cap}")
    return _generate(labels)


def _generate(labels: Tuple[str, ...]) -> Iterator[Subpartition]:
    k = len(labels)
    full_partitions = set_partitions(range(k))
    for size in range(k + 1):
        for domain in combinations(range(k), size):
            for nabla in set_partitions(domain):
                for pp in full_partitions:
                    if not _is_coarser(pp, nabla):
                        continue
                    for order in posets(len(pp)):
                        yield Subpartition(labels, nabla, pp, order)
