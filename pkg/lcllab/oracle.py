"""Brute-force ground truth.

Nothing here reuses the relation, subpartition or group code of the main
modules: types come from explicit path enumeration over python sets,
subpartitions from labelling functions, groups from naive closure.
"""

import time
from collections import deque
from dataclasses import dataclass
from itertools import permutations, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np

from .config import (
    ORACLE_MAX_COLORINGS,
    ORACLE_MAX_INPUT_LABELS,
    ORACLE_MAX_OUTPUT_LABELS,
    RULE_SEARCH_MAX_NODES,
    SearchBudget,
)
from .exceptions import BudgetExceededError, CapExceededError, CertificateError
from .logger import logger
from .problem import LabeledInstance, NormalLcl

LabelPairs = FrozenSet[Tuple[str, str]]
View = Tuple[str, ...]

ORACLE_MAX_BLOCKS = 2_000_000


def check_deadline(deadline: Optional[float], what: str) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceededError(f"{what} ran out of wallclock budget")


def oracle_block_type(p: NormalLcl, block: Sequence[str]) -> LabelPairs:
    pairs = set()
    for start in p.sigma_out:
        frontier = {start}
        for a, b in zip(block, block[1:]):
            frontier = {y for x in frontier for y in p.sigma_out if (a, b, x, y) in p.allowed}
        pairs.update((start, y) for y in frontier)
    return frozenset(pairs)


def oracle_block_types(p: NormalLcl, sigma: str, L: int, deadline: Optional[float] = None) -> Set[LabelPairs]:
    """Types of every sigma-block with 2..L letters, by literal enumeration."""
    total = sum(len(p.sigma_in) ** (length - 2) for length in range(2, L + 1))
    if total > ORACLE_MAX_BLOCKS:
        raise BudgetExceededError(f"{total} blocks up to length {L} exceed the oracle limit")
    found: Set[LabelPairs] = set()
    for length in range(2, L + 1):
        for middle in product(p.sigma_in, repeat=length - 2):
            found.add(oracle_block_type(p, (sigma, *middle, sigma)))
        check_deadline(deadline, "block enumeration")
    return found


def _canonical_blocks(assignment: Sequence[int], labels: Sequence[str], skip: Optional[int] = None):
    blocks: Dict[int, Set[str]] = {}
    for label, value in zip(labels, assignment):
        if value != skip:
            blocks.setdefault(value, set()).add(label)
    return frozenset(frozenset(b) for b in blocks.values())


def _partial_equivalences(labels: Sequence[str]) -> List[FrozenSet[FrozenSet[str]]]:
    k = len(labels)
    found = {_canonical_blocks(a, labels, skip=k) for a in product(range(k + 1), repeat=k)}
    return sorted(found, key=lambda e: sorted(sorted(c) for c in e))


def _partitions(labels: Sequence[str]) -> List[FrozenSet[FrozenSet[str]]]:
    k = len(labels)
    found = {_canonical_blocks(a, labels) for a in product(range(k), repeat=k)}
    return sorted(found, key=lambda e: sorted(sorted(c) for c in e))


def _orders(m: int) -> List[FrozenSet[Tuple[int, int]]]:
    """Reflexive, antisymmetric, transitive relations on range(m)."""
    pairs = [(i, j) for i in range(m) for j in range(m) if i != j]
    found = []
    for bits in product((False, True), repeat=len(pairs)):
        rel = {(i, i) for i in range(m)} | {pair for pair, bit in zip(pairs, bits) if bit}
        if any((j, i) in rel for i, j in rel if i != j):
            continue
        if any((i, l) not in rel for i, j in rel for k, l in rel if j == k):
            continue
        found.append(frozenset(rel))
    return found


def _naive_permutations(
    t: LabelPairs,
    nabla: Sequence[FrozenSet[str]],
    pp: Sequence[FrozenSet[str]],
    order: FrozenSet[Tuple[int, int]],
) -> Set[Tuple[int, ...]]:
    def part(a: str) -> int:
        return next(i for i, block in enumerate(pp) if a in block)

    def cls(a: str) -> Optional[int]:
        return next((i for i, c in enumerate(nabla) if a in c), None)

    if any((part(a), part(b)) not in order for a, b in t):
        return set()
    if any(cls(a) is None and part(a) == part(b) for a, b in t):
        return set()
    result = set()
    for perm in permutations(range(len(nabla))):
        if any(part(next(iter(nabla[c]))) != part(next(iter(nabla[d]))) for c, d in enumerate(perm)):
            continue
        if any(
            cls(a) is not None and cls(b) is not None and part(a) == part(b) and perm[cls(a)] != cls(b)
            for a, b in t
        ):
            continue
        result.add(perm)
    return result


def _naive_closure(gens: Set[Tuple[int, ...]]) -> Set[Tuple[int, ...]]:
    group = set(gens)
    frontier = deque(group)
    while frontier:
        g = frontier.popleft()
        for h in list(group):
            for product_ in (tuple(h[i] for i in g), tuple(g[i] for i in h)):
                if product_ not in group:
                    group.add(product_)
                    frontier.append(product_)
    return group


@dataclass(frozen=True)
class OracleVerdict:
    mixing: bool
    anchor: Optional[str] = None
    nabla: Tuple[Tuple[str, ...], ...] = ()
    partition: Tuple[Tuple[str, ...], ...] = ()


def oracle_is_mixing(p: NormalLcl, budget: Optional[SearchBudget] = None,
                     block_length: Optional[int] = None) -> OracleVerdict:
    budget = budget or SearchBudget()
    if len(p.sigma_out) > ORACLE_MAX_OUTPUT_LABELS or len(p.sigma_in) > ORACLE_MAX_INPUT_LABELS:
        raise CapExceededError(
            f"oracle handles at most {ORACLE_MAX_INPUT_LABELS} inputs and {ORACLE_MAX_OUTPUT_LABELS} outputs"
        )
    L = block_length or budget.max_block_length
    deadline = budget.deadline()
    labels = p.sigma_out
    nablas = _partial_equivalences(labels)
    partitions = _partitions(labels)
    orders = {m: _orders(m) for m in range(1, len(labels) + 1)}

    for sigma in p.sigma_in:
        types = sorted(oracle_block_types(p, sigma, L, deadline), key=sorted)
        for nabla_set in nablas:
            nabla = sorted(nabla_set, key=sorted)
            for pp_set in partitions:
                if not all(any(c <= block for block in pp_set) for c in nabla):
                    continue
                pp = sorted(pp_set, key=sorted)
                for order in orders[len(pp)]:
                    gens: Set[Tuple[int, ...]] = set()
                    for t in types:
                        gens |= _naive_permutations(t, nabla, pp, order)
                    if not gens:
                        continue
                    group = _naive_closure(gens)
                    if not any(all(g[c] == c for g in group) for c in range(len(nabla))):
                        return OracleVerdict(
                            True, sigma,
                            tuple(tuple(sorted(c)) for c in nabla),
                            tuple(tuple(sorted(b)) for b in pp),
                        )
            check_deadline(deadline, "oracle mixing search")
    return OracleVerdict(False)


def oracle_solve(p: NormalLcl, inst: LabeledInstance,
                 limit: int = ORACLE_MAX_COLORINGS) -> Set[Tuple[str, ...]]:
    """Every valid coloring, by enumeration of all |outputs|**n candidates."""
    if len(p.sigma_out) ** inst.n > limit:
        raise BudgetExceededError(f"{len(p.sigma_out)}**{inst.n} colorings exceed the oracle limit")
    edges = inst.edges()
    return {
        out for out in product(p.sigma_out, repeat=inst.n)
        if all((inst.inputs[i], inst.inputs[j], out[i], out[j]) in p.allowed for i, j in edges)
    }


@dataclass(frozen=True)
class WindowRule:
    """Output as a function of the (2t+1) input letters around a node."""

    radius: int
    table: Tuple[Tuple[View, str], ...]

    def output(self, view: Sequence[str]) -> str:
        return dict(self.table)[tuple(view)]

    def to_dict(self) -> Dict[str, object]:
        return {
            "radius": self.radius,
            "table": [{"view": list(view), "output": out} for view, out in self.table],
        }


def window_rule_failures(p: NormalLcl, rule: WindowRule) -> List[Tuple[str, ...]]:
    """Input windows of 2t+2 letters on which the rule breaks the constraint."""
    t = rule.radius
    table = dict(rule.table)
    return [
        w for w in product(p.sigma_in, repeat=2 * t + 2)
        if (w[t], w[t + 1], table[w[:-1]], table[w[1:]]) not in p.allowed
    ]


def certify_window_rule(p: NormalLcl, rule: WindowRule) -> None:
    failures = window_rule_failures(p, rule)
    if failures:
        shown = ", ".join("".join(w) for w in failures[:3])
        raise CertificateError(f"radius-{rule.radius} rule breaks on {len(failures)} window(s), e.g. {shown}")


def find_window_algorithm(
    p: NormalLcl,
    t: int,
    max_nodes: int = RULE_SEARCH_MAX_NODES,
    deadline: Optional[float] = None,
) -> Optional[WindowRule]:
    """Search an input-only rule of radius t that is valid on every input labeling.

    Every pair of adjacent views comes from one window of 2t+2 letters, so a
    rule satisfying all such windows solves every long enough cycle. None is
    inconclusive: rules reading identifiers are not searched.
    """
    views: List[View] = list(product(p.sigma_in, repeat=2 * t + 1))
    index = {v: i for i, v in enumerate(views)}
    k = len(p.sigma_out)
    table = p.allowed_table
    ii = p.input_index

    domains: List[Set[int]] = [set(range(k)) for _ in views]
    arcs: Dict[int, List[Tuple[int, np.ndarray]]] = {i: [] for i in range(len(views))}
    for w in product(p.sigma_in, repeat=2 * t + 2):
        u, v = index[w[:-1]], index[w[1:]]
        rel = table[ii[w[t]], ii[w[t + 1]]]
        if u == v:
            domains[u] = {x for x in domains[u] if rel[x, x]}
        else:
            arcs[u].append((v, rel))
            arcs[v].append((u, rel.T))

    # arc consistency before search
    queue = deque(range(len(views)))
    while queue:
        u = queue.popleft()
        for v, rel in arcs[u]:
            pruned = {y for y in domains[v] if any(rel[x, y] for x in domains[u])}
            if pruned != domains[v]:
                domains[v] = pruned
                queue.append(v)
    if any(not d for d in domains):
        logger.debug(f"no radius-{t} window rule for '{p.name}' (arc consistency)")
        return None

    assignment: List[Optional[int]] = [None] * len(views)
    nodes = 0

    def consistent(u: int, x: int) -> bool:
        return all(assignment[v] is None or rel[x, assignment[v]] for v, rel in arcs[u])

    def search() -> bool:
        # one candidate iterator per assigned view; depth can reach |inputs|**(2t+1)
        nonlocal nodes
        stack = [iter(sorted(domains[0]))]
        while stack:
            u = len(stack) - 1
            for x in stack[-1]:
                nodes += 1
                if nodes > max_nodes:
                    raise BudgetExceededError(f"window rule search exceeded {max_nodes} nodes at radius {t}")
                if nodes % 4096 == 0:
                    check_deadline(deadline, "window rule search")
                if consistent(u, x):
                    assignment[u] = x
                    break
            else:
                stack.pop()
                if stack:
                    assignment[len(stack) - 1] = None
                continue
            if u + 1 == len(views):
                return True
            stack.append(iter(sorted(domains[u + 1])))
        return False

    if not search():
        logger.debug(f"no radius-{t} window rule for '{p.name}' after {nodes} nodes")
        return None
    rule = WindowRule(t, tuple((view, p.sigma_out[x]) for view, x in zip(views, assignment)))
    certify_window_rule(p, rule)
    logger.info(f"radius-{t} window rule certifies '{p.name}' as constant-round solvable")
    return rule
