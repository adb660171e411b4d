from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .blocks import Relation
from .config import EXACT_COUNT_MAX_N
from .exceptions import CapExceededError, InstanceError
from .logger import logger
from .problem import LabeledInstance, NormalLcl, validate_instance

Coloring = Tuple[str, ...]


@dataclass(frozen=True)
class SliceFront:
    position: int
    reach: Relation


def _edge_matrices(p: NormalLcl, inst: LabeledInstance) -> List[np.ndarray]:
    return [
        p.edge_matrix(inst.inputs[i], inst.inputs[j]).astype(np.uint8)
        for i, j in inst.edges()
    ]


def slice_fronts(p: NormalLcl, inst: LabeledInstance) -> Iterator[SliceFront]:
    """Relations between the first node's output and the output at each position."""
    validate_instance(p, inst)
    reach = np.eye(len(p.sigma_out), dtype=np.uint8)
    yield SliceFront(0, Relation.from_matrix(reach))
    for position, edge in enumerate(_edge_matrices(p, inst), start=1):
        reach = ((reach @ edge) > 0).astype(np.uint8)
        yield SliceFront(position, Relation.from_matrix(reach))


def solve_instance(p: NormalLcl, inst: LabeledInstance) -> Optional[Coloring]:
    """Canonically least valid coloring, or None when the instance is unsatisfiable."""
    validate_instance(p, inst)
    k = len(p.sigma_out)
    edges = _edge_matrices(p, inst)
    n = inst.n

    # feasible[i][v]: from value v at node i the remaining edges can be completed
    feasible = [np.zeros(k, dtype=bool) for _ in range(len(edges) + 1)]
    if inst.is_cycle:
        start = None
        for a in range(k):
            target = np.zeros(k, dtype=bool)
            target[a] = True
            back = target
            for edge in reversed(edges):
                back = (edge @ back.astype(np.uint8)) > 0
            if back[a]:
                start = a
                break
        if start is None:
            logger.debug(f"cycle of {n} nodes is unsatisfiable for '{p.name}'")
            return None
        feasible[-1][start] = True
    else:
        feasible[-1][:] = True
    for i in range(len(edges) - 1, -1, -1):
        feasible[i] = (edges[i] @ feasible[i + 1].astype(np.uint8)) > 0

    if inst.is_cycle:
        values = [start]
    else:
        if not feasible[0].any():
            return None
        values = [int(np.argmax(feasible[0]))]
    for i in range(1, n):
        candidates = edges[i - 1][values[-1]].astype(bool) & feasible[i]
        values.append(int(np.argmax(candidates)))
    return tuple(p.sigma_out[v] for v in values)


def verify_solution(p: NormalLcl, inst: LabeledInstance, out: Sequence[str]) -> List[int]:
    """Positions i whose edge to the successor is rejected."""
    if len(out) != inst.n:
        raise InstanceError(f"{len(out)} outputs for {inst.n} nodes")
    for label in out:
        p.require_output(label)
    return [
        i for i, j in inst.edges()
        if not p.allows(inst.inputs[i], inst.inputs[j], out[i], out[j])
    ]


def count_solutions(p: NormalLcl, inst: LabeledInstance, cap: int = EXACT_COUNT_MAX_N) -> int:
    validate_instance(p, inst)
    if inst.n > cap:
        raise CapExceededError(f"exact counting is capped at n={cap}, got {inst.n}")
    k = len(p.sigma_out)
    total = np.identity(k, dtype=object)
    for edge in _edge_matrices(p, inst):
        total = total.dot(edge.astype(object))
    if inst.is_cycle:
        return int(sum(total[a, a] for a in range(k)))
    return int(total.sum())
