"""Mixing decision: permutation blocks, the group they generate, fixed points."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation, PermutationGroup

from .blocks import Relation, block_type, enumerate_block_types
from .config import MAX_OUTPUT_LABELS
from .exceptions import CapExceededError, CertificateError, InconsistencyError
from .logger import logger
from .problem import NormalLcl, format_block
from .subpartition import Subpartition, enumerate_subpartitions

ClassPermutation = Tuple[int, ...]

UNSOLVABLE_INSTANCE = "UNSOLVABLE_INSTANCE"


@dataclass(frozen=True)
class BlockPermutation:
    mapping: ClassPermutation
    witness: Tuple[str, ...]


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: Tuple[ClassPermutation, ...]
    elements: FrozenSet[ClassPermutation]

    @property
    def is_empty_marker(self) -> bool:
        return not self.elements

    @property
    def order(self) -> int:
        return len(self.elements)


def permutations_of_block(t: Relation, sp: Subpartition) -> FrozenSet[ClassPermutation]:
    """All permutations of nabla-classes that block type `t` induces under `sp`.

    Pairs of `t` must go upward in the order on pp-classes, pairs leaving an
    undomained letter must change pp-class, and pairs inside one pp-class
    between domained letters force the image of a class.
    """
    nabla_of, pp_of = sp.nabla_of, sp.pp_of
    forced: Dict[int, int] = {}
    for a, b in t.pairs():
        if not sp.precedes(pp_of[a], pp_of[b]):
            return frozenset()
        if pp_of[a] != pp_of[b]:
            continue
        if nabla_of[a] < 0:
            return frozenset()
        if nabla_of[b] < 0:
            continue
        source, target = nabla_of[a], nabla_of[b]
        if forced.setdefault(source, target) != target:
            return frozenset()
    if len(set(forced.values())) != len(forced):
        return frozenset()

    degree = len(sp.nabla)
    if degree == 0:
        return frozenset({()})

    # unforced classes range over bijections onto the unused classes of their pp-class
    groups: List[Tuple[List[int], List[List[int]]]] = []
    for members in sp.pp:
        classes = sorted({nabla_of[a] for a in members if nabla_of[a] >= 0})
        free = [c for c in classes if c not in forced]
        targets = [c for c in classes if c not in forced.values()]
        groups.append((free, [list(perm) for perm in permutations(targets)]))

    result = set()
    for choice in product(*(options for _, options in groups)):
        mapping = dict(forced)
        for (free, _), images in zip(groups, choice):
            mapping.update(zip(free, images))
        result.add(tuple(mapping[c] for c in range(degree)))
    return frozenset(result)


def group_closure(gens: Sequence[ClassPermutation], degree: Optional[int] = None) -> PermGroup:
    gens = tuple(dict.fromkeys(tuple(g) for g in gens))
    if degree is None:
        degree = len(gens[0]) if gens else 0
    if not gens:
        return PermGroup(degree, (), frozenset())
    if degree == 0:
        return PermGroup(0, gens, frozenset({()}))
    group = PermutationGroup([Permutation(list(g)) for g in gens])
    elements = frozenset(tuple(int(x) for x in af) for af in group.generate(af=True))
    return PermGroup(degree, gens, elements)


def _fixed_classes(gens: Sequence[ClassPermutation], degree: int) -> List[int]:
    return [c for c in range(degree) if all(g[c] == c for g in gens)]


def has_fixed_point(g: PermGroup, sp: Subpartition) -> Optional[Tuple[str, ...]]:
    """Least nabla-class fixed by every element of `g`; None when there is none."""
    if g.is_empty_marker:
        raise InconsistencyError("fixed points are undefined for the empty group marker")
    fixed = _fixed_classes(tuple(g.elements), len(sp.nabla))
    return sp.nabla_labels(fixed[0]) if fixed else None


@dataclass(frozen=True)
class MixingWitness:
    anchor: str
    subpartition: Subpartition
    generators: Tuple[BlockPermutation, ...]
    group: PermGroup
    note: Optional[str] = None

    def to_dict(self) -> Dict[str, object]:
        sp = self.subpartition
        return {
            "anchor": self.anchor,
            "subpartition": sp.to_dict(),
            "generators": [
                {
                    "block": format_block(gen.witness),
                    "permutation": [
                        [list(sp.nabla_labels(c)), list(sp.nabla_labels(image))]
                        for c, image in enumerate(gen.mapping)
                    ],
                }
                for gen in self.generators
            ],
            "group_order": self.group.order,
            "note": self.note,
        }


@dataclass(frozen=True)
class CandidateSummary:
    anchor: str
    subpartition: Subpartition
    fixed_class: Tuple[str, ...]
    permutation_blocks: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "anchor": self.anchor,
            "subpartition": self.subpartition.to_dict(),
            "fixed_class": list(self.fixed_class),
            "permutation_blocks": self.permutation_blocks,
        }


@dataclass(frozen=True)
class MixingVerdict:
    mixing: bool
    witness: Optional[MixingWitness] = None
    summary: Tuple[CandidateSummary, ...] = field(default=())
    candidates_checked: int = 0

    @property
    def unsolvable_instance(self) -> bool:
        return self.witness is not None and self.witness.note == UNSOLVABLE_INSTANCE

    def to_dict(self, full: bool = False) -> Dict[str, object]:
        data: Dict[str, object] = {
            "mixing": self.mixing,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "candidates_checked": self.candidates_checked,
        }
        if full:
            data["summary"] = [s.to_dict() for s in self.summary]
        return data


@dataclass(frozen=True)
class _AnchorResult:
    witness: Optional[MixingWitness]
    summary: Tuple[CandidateSummary, ...]
    checked: int


def _compact_generators(gens: Sequence[BlockPermutation], degree: int) -> Tuple[BlockPermutation, ...]:
    """Keep one generator per newly moved class; the result still moves every class."""
    kept: List[BlockPermutation] = []
    moved = set()
    for gen in gens:
        newly = {c for c in range(degree) if gen.mapping[c] != c} - moved
        if newly:
            kept.append(gen)
            moved |= newly
    return tuple(kept)


def _decide_anchor(p: NormalLcl, sigma: str, cap: int, full: bool) -> _AnchorResult:
    atlas = enumerate_block_types(p, sigma)
    types = list(atlas.achievable.items())
    summary: List[CandidateSummary] = []
    checked = 0
    for sp in enumerate_subpartitions(p.sigma_out, cap):
        checked += 1
        gens: List[BlockPermutation] = []
        for rel, witness in types:
            for mapping in sorted(permutations_of_block(rel, sp)):
                gens.append(BlockPermutation(mapping, witness))
        if not gens:
            continue
        degree = len(sp.nabla)
        fixed = _fixed_classes([g.mapping for g in gens], degree)
        if not fixed:
            if degree == 0:
                generators = (gens[0],)
            else:
                generators = _compact_generators(gens, degree)
            group = group_closure([g.mapping for g in generators], degree)
            note = UNSOLVABLE_INSTANCE if sp.is_unsolvability_candidate else None
            witness = MixingWitness(sigma, sp, generators, group, note)
            return _AnchorResult(witness, tuple(summary), checked)
        if full:
            summary.append(CandidateSummary(sigma, sp, sp.nabla_labels(fixed[0]), len(gens)))
    return _AnchorResult(None, tuple(summary), checked)


def is_mixing(p: NormalLcl, cap: Optional[int] = None, full: bool = False, jobs: int = 1) -> MixingVerdict:
    """Decide whether some anchor and subpartition yield a group without fixed class.

    Anchors are independent; with `jobs > 1` they are evaluated in worker
    processes and merged in canonical order so the first witness is the same
    as in a sequential run.
    """
    cap = MAX_OUTPUT_LABELS if cap is None else cap
    if len(p.sigma_out) > cap:
        raise CapExceededError(f"{len(p.sigma_out)} output labels exceed the cap of {cap}")

    if jobs > 1 and len(p.sigma_in) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(p.sigma_in))) as pool:
            futures = [pool.submit(_decide_anchor, p, sigma, cap, full) for sigma in p.sigma_in]
            results = [f.result() for f in futures]
    else:
        results = []
        for sigma in p.sigma_in:
            results.append(_decide_anchor(p, sigma, cap, full))
            if results[-1].witness is not None:
                break

    checked = 0
    summary: List[CandidateSummary] = []
    for result in results:
        checked += result.checked
        summary.extend(result.summary)
        if result.witness is not None:
            logger.info(
                f"'{p.name}' is mixing: anchor {result.witness.anchor}, "
                f"{len(result.witness.generators)} generator block(s)"
            )
            return MixingVerdict(True, result.witness, tuple(summary), checked)
    logger.info(f"'{p.name}' is not mixing after {checked} candidates")
    return MixingVerdict(False, None, tuple(summary), checked)


def check_witness(p: NormalLcl, verdict: MixingVerdict) -> None:
    """Re-derive a mixing certificate from its blocks; raises CertificateError if it fails."""
    if not verdict.mixing:
        return
    w = verdict.witness
    if w is None or not w.generators:
        raise CertificateError("mixing verdict carries no generator blocks")
    sp = w.subpartition
    for gen in w.generators:
        if gen.witness[0] != w.anchor:
            raise CertificateError(f"block {format_block(gen.witness)} does not start at {w.anchor}")
        if gen.mapping not in permutations_of_block(block_type(p, gen.witness), sp):
            raise CertificateError(f"block {format_block(gen.witness)} does not induce its claimed permutation")
    degree = len(sp.nabla)
    if _fixed_classes([g.mapping for g in w.generators], degree):
        raise CertificateError("generated group fixes a nabla-class")
    if group_closure([g.mapping for g in w.generators], degree) != w.group:
        raise CertificateError("reported group differs from the closure of its generators")
