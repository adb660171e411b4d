"""Classification of problems without inputs by their output automaton."""

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
import numpy as np

from .exceptions import NotNoInputError, UnknownLabelError
from .logger import logger
from .problem import NormalLcl


class NoInputClass(str, Enum):
    CONSTANT_O1 = "CONSTANT_O1"
    LOGSTAR = "LOGSTAR"
    GLOBAL = "GLOBAL"


@dataclass(frozen=True)
class ProblemAutomaton:
    states: Tuple[str, ...]
    edges: FrozenSet[Tuple[str, str]]
    scc_partition: Tuple[Tuple[str, ...], ...]
    periods: Tuple[int, ...]

    @property
    def adjacency(self) -> np.ndarray:
        index = {s: i for i, s in enumerate(self.states)}
        matrix = np.zeros((len(self.states), len(self.states)), dtype=np.uint8)
        for a, b in self.edges:
            matrix[index[a], index[b]] = 1
        return matrix

    def has_loop(self, state: str) -> bool:
        return (state, state) in self.edges

    def period_of(self, state: str) -> int:
        for members, period in zip(self.scc_partition, self.periods):
            if state in members:
                return period
        raise UnknownLabelError(f"unknown state '{state}'")

    def has_internal_edge(self, members: Tuple[str, ...]) -> bool:
        inside = set(members)
        return any(a in inside and b in inside for a, b in self.edges)


@dataclass(frozen=True)
class NoInputVerdict:
    complexity: NoInputClass
    loop_state: Optional[str] = None
    state: Optional[str] = None
    k0: Optional[int] = None
    periodic_components: Tuple[Tuple[Tuple[str, ...], int], ...] = ()

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {"class": self.complexity.value}
        if self.complexity is NoInputClass.CONSTANT_O1:
            data["loop"] = self.loop_state
        elif self.complexity is NoInputClass.LOGSTAR:
            data["state"] = self.state
            data["k0"] = self.k0
        else:
            data["components"] = [
                {"states": list(states), "period": period}
                for states, period in self.periodic_components
            ]
        return data


def _period(graph: nx.DiGraph, members: List[str]) -> int:
    sub = graph.subgraph(members)
    if sub.number_of_edges() == 0:
        return 0
    level = nx.single_source_shortest_path_length(sub, members[0])
    return reduce(gcd, (level[a] + 1 - level[b] for a, b in sub.edges()), 0)


def build_automaton(p: NormalLcl) -> ProblemAutomaton:
    if len(p.sigma_in) != 1:
        raise NotNoInputError(f"'{p.name}' has {len(p.sigma_in)} input labels; the automaton needs exactly one")
    (u,) = p.sigma_in
    edges = frozenset((x, y) for x in p.sigma_out for y in p.sigma_out if p.allows(u, u, x, y))

    graph = nx.DiGraph()
    graph.add_nodes_from(p.sigma_out)
    graph.add_edges_from(sorted(edges))

    order = p.output_index
    components = [sorted(c, key=order.__getitem__) for c in nx.strongly_connected_components(graph)]
    components.sort(key=lambda c: order[c[0]])
    periods = tuple(_period(graph, c) for c in components)
    return ProblemAutomaton(p.sigma_out, edges, tuple(tuple(c) for c in components), periods)


def closed_walk_lengths(a: ProblemAutomaton, state: str, limit: int) -> List[int]:
    index = {s: i for i, s in enumerate(a.states)}
    if state not in index:
        raise UnknownLabelError(f"unknown state '{state}'")
    s = index[state]
    adjacency = a.adjacency
    power = np.eye(len(a.states), dtype=np.uint8)
    lengths = []
    for length in range(1, limit + 1):
        power = ((power @ adjacency) > 0).astype(np.uint8)
        if power[s, s]:
            lengths.append(length)
    return lengths


def classify_no_input(a: ProblemAutomaton) -> NoInputVerdict:
    for state in a.states:
        if a.has_loop(state):
            logger.info(f"loop at {state}: constant-round solvable")
            return NoInputVerdict(NoInputClass.CONSTANT_O1, loop_state=state)

    n = len(a.states)
    for members, period in zip(a.scc_partition, a.periods):
        if period != 1:
            continue
        state = members[0]
        # walk lengths with gcd 1 show up within the primitive exponent bound
        lengths = closed_walk_lengths(a, state, (n - 1) ** 2 + 2)
        chosen = []
        running = 0
        for length in lengths:
            reduced = gcd(running, length)
            if reduced != running:
                chosen.append(length)
                running = reduced
            if running == 1:
                break
        k0 = chosen[0] * chosen[-1]
        logger.info(f"aperiodic component at {state}: closed walks of every length >= {k0}")
        return NoInputVerdict(NoInputClass.LOGSTAR, state=state, k0=k0)

    periodic = tuple(
        (members, period)
        for members, period in zip(a.scc_partition, a.periods)
        if a.has_internal_edge(members)
    )
    return NoInputVerdict(NoInputClass.GLOBAL, periodic_components=periodic)


def walk_of_length(a: ProblemAutomaton, state: str, k: int) -> Optional[List[str]]:
    """Lexicographically least closed walk state -> state with exactly k edges."""
    if k < 1:
        raise ValueError(f"walk length must be at least 1, got {k}")
    index = {s: i for i, s in enumerate(a.states)}
    if state not in index:
        raise UnknownLabelError(f"unknown state '{state}'")
    adjacency = a.adjacency
    # feasible[j][v]: v reaches `state` in exactly j steps
    feasible = [np.zeros(len(a.states), dtype=bool)]
    feasible[0][index[state]] = True
    for _ in range(k):
        feasible.append((adjacency @ feasible[-1].astype(np.uint8)) > 0)
    if not feasible[k][index[state]]:
        return None

    walk = [state]
    current = index[state]
    for remaining in range(k - 1, -1, -1):
        current = next(
            v for v in range(len(a.states)) if adjacency[current, v] and feasible[remaining][v]
        )
        walk.append(a.states[current])
    return walk
