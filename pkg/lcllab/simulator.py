"""Synchronous LOCAL-model execution on cycles.

A t-round algorithm is a function of the radius-t view around each node.
The ruling-set routine is simulated level by level with vectorised numpy
rounds; `rounds_used` always counts physical hops, so a round on a virtual
cycle whose edges span up to g nodes is charged g rounds.
"""

from dataclasses import dataclass, field
from itertools import product
from math import log2
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .automaton import NoInputClass, NoInputVerdict, build_automaton, walk_of_length
from .config import CV_TARGET_COLORS, PROBE_MAX_ASSIGNMENTS
from .exceptions import (
    BudgetExceededError,
    CertificateError,
    InconsistencyError,
    InstanceError,
    SimulationError,
)
from .logger import logger
from .oracle import WindowRule
from .problem import LabeledInstance, NormalLcl, validate_instance
from .randomness import node_bits
from .solver import verify_solution

MIS_ROUNDS = 3
REDUCTION_ROUNDS = 3


@dataclass(frozen=True)
class View:
    """Radius-t neighbourhood in orientation order; the node itself sits at index t."""

    radius: int
    inputs: Tuple[str, ...]
    ids: Optional[Tuple[int, ...]] = None
    bits: Optional[Tuple[int, ...]] = None

    @property
    def center_input(self) -> str:
        return self.inputs[self.radius]


Rule = Callable[[View], str]


@dataclass(frozen=True)
class ViewAlgorithm:
    name: str
    radius: int
    rule: Rule
    needs_ids: bool = False
    needs_bits: bool = False


@dataclass(frozen=True)
class SimulationTrace:
    algorithm: str
    rounds_used: int
    outputs: Tuple[str, ...]
    violations: Tuple[int, ...]
    marks: Optional[Tuple[bool, ...]] = None
    round_budget: Optional[int] = None
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            "algorithm": self.algorithm,
            "n": len(self.outputs),
            "rounds_used": self.rounds_used,
            "round_budget": self.round_budget,
            "outputs": list(self.outputs),
            "violations": list(self.violations),
        }
        if self.marks is not None:
            marked = [i for i, m in enumerate(self.marks) if m]
            data["marks"] = marked
            data["spacing"] = ruling_gaps(self.marks)
        data.update(self.details)
        return data


def log_star(x: float) -> int:
    """Times log2 has to be applied before the value drops to at most 1."""
    count = 0
    while x > 1:
        x = log2(x)
        count += 1
    return count


def _view(inst: LabeledInstance, i: int, t: int, bits: Optional[np.ndarray]) -> View:
    n = inst.n
    window = [(i + d) % n for d in range(-t, t + 1)]
    return View(
        t,
        tuple(inst.inputs[j] for j in window),
        None if inst.ids is None else tuple(inst.ids[j] for j in window),
        None if bits is None else tuple(int(bits[j]) for j in window),
    )


def run_view_algorithm(alg: ViewAlgorithm, p: NormalLcl, inst: LabeledInstance) -> SimulationTrace:
    validate_instance(p, inst)
    if not inst.is_cycle:
        raise SimulationError("view algorithms are simulated on cycles only")
    if inst.n <= 2 * alg.radius:
        raise SimulationError(f"cycle of {inst.n} nodes is too short for radius {alg.radius}")
    if alg.needs_ids and inst.ids is None:
        raise SimulationError(f"algorithm '{alg.name}' needs identifiers")
    if alg.needs_bits and inst.rng_seed is None:
        raise SimulationError(f"algorithm '{alg.name}' needs a random seed")

    bits = node_bits(inst.n, inst.rng_seed) if alg.needs_bits else None
    outputs = []
    for i in range(inst.n):
        label = alg.rule(_view(inst, i, alg.radius, bits))
        if label not in p.output_index:
            raise SimulationError(f"rule '{alg.name}' produced '{label}' outside the output alphabet")
        outputs.append(label)
    violations = verify_solution(p, inst, outputs)
    logger.debug(f"{alg.name}: {len(violations)} violation(s) on {inst.n} nodes")
    return SimulationTrace(alg.name, alg.radius, tuple(outputs), tuple(violations))


def constant_algorithm(label: str) -> ViewAlgorithm:
    return ViewAlgorithm(f"constant:{label}", 0, lambda view: label)


def copy_algorithm(p: NormalLcl) -> ViewAlgorithm:
    """Output letter number (input index mod |outputs|)."""
    index = p.input_index
    outputs = p.sigma_out
    return ViewAlgorithm("copy", 0, lambda view: outputs[index[view.center_input] % len(outputs)])


def majority_algorithm(p: NormalLcl) -> ViewAlgorithm:
    """Radius-1 rule: majority of the identifier parities in the view picks output 0 or 1."""
    outputs = p.sigma_out

    def rule(view: View) -> str:
        odd = sum(i & 1 for i in view.ids)
        return outputs[min(int(odd >= 2), len(outputs) - 1)]

    return ViewAlgorithm("majority", 1, rule, needs_ids=True)


def window_algorithm(rule: WindowRule) -> ViewAlgorithm:
    table = dict(rule.table)
    return ViewAlgorithm(f"window:r{rule.radius}", rule.radius, lambda view: table[view.inputs])


# Ruling sets


@dataclass(frozen=True)
class RulingSet:
    marks: Tuple[bool, ...]
    rounds_used: int
    round_budget: int
    levels: int

    @property
    def gaps(self) -> List[int]:
        return ruling_gaps(self.marks)


def _gaps(positions: Sequence[int], n: int) -> List[int]:
    positions = list(positions)
    return [(b - a) % n or n for a, b in zip(positions, positions[1:] + positions[:1])]


def ruling_gaps(marks: Sequence[bool]) -> List[int]:
    """Distances from each marked node to the next one along the cycle."""
    return _gaps([i for i, m in enumerate(marks) if m], len(marks))


def cole_vishkin_iterations(max_id: int) -> int:
    """Halving steps until identifiers below max_id + 1 are reduced to at most six colors."""
    colors = max_id + 1
    steps = 0
    while colors > CV_TARGET_COLORS:
        colors = 2 * (colors - 1).bit_length()
        steps += 1
    return steps


def _levels(k: int) -> int:
    # every level at least doubles the smallest gap; k*k - k is the gap that always splits
    return 0 if k == 1 else (k * k - k - 1).bit_length()


def budget_coefficients(k: int) -> Tuple[int, int]:
    """(C, C') such that round_budget(k, max_id) == C * cole_vishkin_iterations(max_id) + C'.

    Level j spans virtual edges of at most 3**j hops, so C is the sum of
    those spans and grows like 3**levels. For k = 2 the budget is at most
    13 rounds on identifiers below 2**64.
    """
    levels = _levels(k)
    if levels == 0:
        return 0, 0
    spans = (3 ** levels - 1) // 2
    return spans, (REDUCTION_ROUNDS + MIS_ROUNDS) * spans + 3 ** levels


def round_budget(k: int, max_id: int) -> int:
    """Worst-case rounds of `ruling_set` on identifiers up to max_id."""
    c, c0 = budget_coefficients(k)
    return c * cole_vishkin_iterations(max_id) + c0


def _lowest_bit(diff: np.ndarray) -> np.ndarray:
    low = diff & (~diff + np.uint64(1))
    _, exponent = np.frexp(low.astype(np.float64))
    return (exponent - 1).astype(np.uint64)


def _cole_vishkin(colors: np.ndarray, iterations: int) -> np.ndarray:
    """Reduce a proper coloring of a directed cycle, given in cycle order."""
    for _ in range(iterations):
        succ = np.roll(colors, -1)
        idx = _lowest_bit(colors ^ succ)
        colors = np.uint64(2) * idx + ((colors >> idx) & np.uint64(1))
    return colors


def _three_color(colors: np.ndarray) -> np.ndarray:
    colors = colors.astype(np.int64)
    for c in range(CV_TARGET_COLORS - 1, 2, -1):
        pred, succ = np.roll(colors, 1), np.roll(colors, -1)
        pick = np.zeros_like(colors)
        for candidate in (2, 1, 0):
            free = (pred != candidate) & (succ != candidate)
            pick = np.where(free, candidate, pick)
        colors = np.where(colors == c, pick, colors)
    return colors


def _mis(colors: np.ndarray) -> np.ndarray:
    chosen = np.zeros(len(colors), dtype=bool)
    for c in range(3):
        blocked = np.roll(chosen, 1) | np.roll(chosen, -1)
        chosen |= (colors == c) & ~blocked
    return chosen


def _subdivide(n: int, positions: Sequence[int], k: int) -> np.ndarray:
    """Cut every gap d into d % k parts of k + 1 followed by parts of k."""
    starts = np.asarray(positions, dtype=np.int64)
    gaps = np.asarray(_gaps(positions, n), dtype=np.int64)
    parts, longer = gaps // k, gaps % k
    first = np.repeat(np.cumsum(parts) - parts, parts)
    m = np.arange(int(parts.sum()), dtype=np.int64) - first
    offsets = m * k + np.minimum(m, np.repeat(longer, parts))
    marks = np.zeros(n, dtype=bool)
    marks[(np.repeat(starts, parts) + offsets) % n] = True
    return marks


def ruling_set(inst: LabeledInstance, k: int) -> RulingSet:
    """Mark nodes so that consecutive marks are exactly k or k + 1 hops apart.

    Levels of Cole-Vishkin color reduction and greedy MIS on the cycle of
    current marks spread them until every gap is at least k*k - k; each gap
    is then cut into parts of k + 1 and k nodes.
    """
    if k < 1:
        raise SimulationError(f"k must be at least 1, got {k}")
    if not inst.is_cycle:
        raise SimulationError("ruling sets are computed on cycles only")
    if inst.ids is None:
        raise SimulationError("ruling set needs identifiers")
    n = inst.n
    if len(set(inst.ids)) != n:
        raise InstanceError("identifiers are not distinct")
    if n < max(k * k - k, 1):
        raise SimulationError(f"n={n} is too small for spacing {k}/{k + 1} (need n >= {k * k - k})")
    if min(inst.ids) < 0:
        raise InstanceError("identifiers must be non-negative")

    max_id = max(inst.ids)
    budget = round_budget(k, max_id)
    if k == 1:
        return RulingSet(tuple([True] * n), 0, budget, 0)

    iterations = cole_vishkin_iterations(max_id)
    ids = np.array(inst.ids, dtype=np.uint64)
    positions = np.arange(n)
    rounds = 0
    levels = _levels(k)
    done = 0
    for _ in range(levels):
        if len(positions) <= 2:
            break
        span = max(_gaps(positions.tolist(), n))
        colors = _cole_vishkin(ids[positions], iterations)
        chosen = _mis(_three_color(colors))
        positions = positions[chosen]
        rounds += (iterations + REDUCTION_ROUNDS + MIS_ROUNDS) * span
        done += 1
    if done < levels and len(positions) <= 2:
        # the whole cycle is inside the view of its smallest identifier
        positions = np.array([positions[np.argmin(ids[positions])]])

    gaps = _gaps(positions.tolist(), n)
    rounds += max(gaps)
    marks = _subdivide(n, positions.tolist(), k)
    logger.debug(f"ruling set k={k} on n={n}: {int(marks.sum())} marks after {done} level(s), {rounds} rounds")
    return RulingSet(tuple(marks.tolist()), rounds, budget, done)


def ruling_trace(inst: LabeledInstance, k: int) -> SimulationTrace:
    """Ruling set as a trace: marked nodes output 1, violations are marks with a bad gap."""
    rs = ruling_set(inst, k)
    positions = [i for i, m in enumerate(rs.marks) if m]
    bad = tuple(i for i, d in zip(positions, rs.gaps) if d not in (k, k + 1))
    outputs = tuple("1" if m else "0" for m in rs.marks)
    return SimulationTrace(
        "ruling", rs.rounds_used, outputs, bad, rs.marks, rs.round_budget,
        {"k": k, "levels": rs.levels, "budget_coefficients": list(budget_coefficients(k))},
    )


def solve_ergodic(p: NormalLcl, inst: LabeledInstance,
                  verdict: Optional[NoInputVerdict]) -> SimulationTrace:
    """Mark a (k0+1, k0+2) ruling set with the ergodic state and fill gaps with closed walks."""
    if verdict is None or verdict.complexity is not NoInputClass.LOGSTAR:
        raise CertificateError(f"'{p.name}' has no ergodic certificate (state, k0)")
    validate_instance(p, inst)
    k = verdict.k0 + 1
    if inst.n < k * k + k:
        raise SimulationError(
            f"n={inst.n} is too small for the ergodic solver with k0={verdict.k0} (need n >= {k * k + k})"
        )
    a = build_automaton(p)
    rs = ruling_set(inst, k)

    walks: Dict[int, List[str]] = {}
    outputs: List[Optional[str]] = [None] * inst.n
    positions = [i for i, m in enumerate(rs.marks) if m]
    for start, d in zip(positions, rs.gaps):
        if d not in walks:
            walk = walk_of_length(a, verdict.state, d)
            if walk is None:
                raise InconsistencyError(f"no closed walk of length {d} at {verdict.state} despite k0={verdict.k0}")
            walks[d] = walk
        for offset in range(d):
            outputs[(start + offset) % inst.n] = walks[d][offset]

    filled = tuple(outputs)
    violations = verify_solution(p, inst, filled)
    rounds = rs.rounds_used + k + 1
    logger.info(f"ergodic solver: {inst.n} nodes, {rounds} rounds, {len(violations)} violation(s)")
    return SimulationTrace(
        "ergodic", rounds, filled, tuple(violations), rs.marks,
        rs.round_budget + k + 1, {"state": verdict.state, "k0": verdict.k0},
    )


# Locality probing


@dataclass(frozen=True)
class ProbeRow:
    radius: int
    instance: int
    n: int
    views: int
    best_violations: int

    def to_dict(self) -> Dict[str, int]:
        return {
            "t": self.radius,
            "instance": self.instance,
            "n": self.n,
            "views": self.views,
            "best_violations": self.best_violations,
        }


def _best_window_assignment(p: NormalLcl, inst: LabeledInstance, t: int,
                            max_assignments: int) -> Tuple[int, int]:
    n = inst.n
    windows = [tuple(inst.inputs[(i + d) % n] for d in range(-t, t + 1)) for i in range(n)]
    views = sorted(set(windows))
    index = {v: j for j, v in enumerate(views)}
    k = len(p.sigma_out)
    if k ** len(views) > max_assignments:
        raise BudgetExceededError(
            f"{k}**{len(views)} rules at radius {t} exceed the locality search limit of {max_assignments}"
        )

    counts: Dict[Tuple[int, int], int] = {}
    for i, j in inst.edges():
        key = (index[windows[i]], index[windows[j]])
        counts[key] = counts.get(key, 0) + 1

    rules = np.array(list(product(range(k), repeat=len(views))), dtype=np.intp).reshape(-1, len(views))
    table = p.allowed_table
    ii = p.input_index
    violations = np.zeros(len(rules), dtype=np.int64)
    for (u, v), count in counts.items():
        allowed = table[ii[views[u][t]], ii[views[v][t]]]
        violations += count * ~allowed[rules[:, u], rules[:, v]]
    return len(views), int(violations.min())


def probe_locality(
    p: NormalLcl,
    instances: Iterable[LabeledInstance],
    t_max: int,
    max_assignments: int = PROBE_MAX_ASSIGNMENTS,
) -> List[ProbeRow]:
    """Fewest violations any input-only radius-t rule achieves on each instance, for t <= t_max.

    Only the views that occur in an instance matter there, so every
    assignment of outputs to those views is tried.
    """
    rows = []
    instances = list(instances)
    for t in range(t_max + 1):
        for number, inst in enumerate(instances):
            validate_instance(p, inst)
            if not inst.is_cycle or inst.n <= 2 * t:
                raise SimulationError(f"instance {number} is not a cycle longer than {2 * t} nodes")
            views, best = _best_window_assignment(p, inst, t, max_assignments)
            rows.append(ProbeRow(t, number, inst.n, views, best))
            logger.debug(f"locality search t={t} instance {number}: {best} violation(s) at best over {views} view(s)")
    return rows
