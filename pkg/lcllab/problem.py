"""LCL problems on oriented paths and cycles, in general and normal form."""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import (
    DuplicateLabelError,
    InstanceError,
    ProblemSyntaxError,
    UnknownLabelError,
)

Quadruple = Tuple[str, str, str, str]
Window = Tuple[Tuple[str, str], ...]

# Output letter of a normalized problem that has no accepted window at all.
VOID_LETTER = "void"
# Characters that join (input, output) pairs into window letters.
WINDOW_SEPARATORS = "/:"


class Topology(str, Enum):
    CYCLE = "cycle"
    PATH = "path"


def _check_alphabet(labels: Sequence[str], what: str) -> None:
    if not labels:
        raise ProblemSyntaxError(f"{what} alphabet is empty")
    seen = set()
    for label in labels:
        if label in seen:
            raise DuplicateLabelError(f"duplicate {what} label '{label}'")
        seen.add(label)


@dataclass(frozen=True)
class NormalLcl:
    """Pairwise-checkable LCL: `allowed` holds (in_left, in_right, out_left, out_right)."""

    name: str
    sigma_in: Tuple[str, ...]
    sigma_out: Tuple[str, ...]
    allowed: FrozenSet[Quadruple]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma_in", tuple(self.sigma_in))
        object.__setattr__(self, "sigma_out", tuple(self.sigma_out))
        object.__setattr__(self, "allowed", frozenset(tuple(q) for q in self.allowed))
        _check_alphabet(self.sigma_in, "input")
        _check_alphabet(self.sigma_out, "output")
        inputs, outputs = set(self.sigma_in), set(self.sigma_out)
        for quad in self.allowed:
            if len(quad) != 4:
                raise ProblemSyntaxError(f"allowed entry {quad!r} is not a quadruple")
            a, b, x, y = quad
            for label in (a, b):
                if label not in inputs:
                    raise UnknownLabelError(f"unknown label '{label}'")
            for label in (x, y):
                if label not in outputs:
                    raise UnknownLabelError(f"unknown label '{label}'")

    def allows(self, a: str, b: str, x: str, y: str) -> bool:
        return (a, b, x, y) in self.allowed

    @cached_property
    def input_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.sigma_in)}

    @cached_property
    def output_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.sigma_out)}

    @cached_property
    def allowed_table(self) -> np.ndarray:
        """Boolean array indexed [in_left, in_right, out_left, out_right]."""
        k_in, k_out = len(self.sigma_in), len(self.sigma_out)
        table = np.zeros((k_in, k_in, k_out, k_out), dtype=bool)
        ii, oi = self.input_index, self.output_index
        for a, b, x, y in self.allowed:
            table[ii[a], ii[b], oi[x], oi[y]] = True
        table.setflags(write=False)
        return table

    def require_input(self, label: str) -> int:
        try:
            return self.input_index[label]
        except KeyError:
            raise UnknownLabelError(f"unknown label '{label}' (inputs are {' '.join(self.sigma_in)})") from None

    def require_output(self, label: str) -> int:
        try:
            return self.output_index[label]
        except KeyError:
            raise UnknownLabelError(f"unknown label '{label}' (outputs are {' '.join(self.sigma_out)})") from None

    def edge_matrix(self, a: str, b: str) -> np.ndarray:
        """Relation {(x, y) : allowed(a, b, x, y)} as a read-only boolean matrix."""
        return self.allowed_table[self.require_input(a), self.require_input(b)]


@dataclass(frozen=True)
class GeneralLcl:
    """Radius-r LCL given by its accepted (2r+1)-windows of (input, output) pairs."""

    name: str
    sigma_in: Tuple[str, ...]
    sigma_out: Tuple[str, ...]
    radius: int
    accepted_windows: FrozenSet[Window]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma_in", tuple(self.sigma_in))
        object.__setattr__(self, "sigma_out", tuple(self.sigma_out))
        object.__setattr__(
            self,
            "accepted_windows",
            frozenset(tuple((i, o) for i, o in w) for w in self.accepted_windows),
        )
        _check_alphabet(self.sigma_in, "input")
        _check_alphabet(self.sigma_out, "output")
        if self.radius < 0:
            raise ProblemSyntaxError(f"radius must be non-negative, got {self.radius}")
        for label in self.sigma_in + self.sigma_out:
            if any(ch in label for ch in WINDOW_SEPARATORS):
                raise ProblemSyntaxError(f"label '{label}' contains a window separator ('/' or ':')")
        inputs, outputs = set(self.sigma_in), set(self.sigma_out)
        for window in self.accepted_windows:
            if len(window) != self.window_size:
                raise ProblemSyntaxError(
                    f"window has {len(window)} positions, radius {self.radius} needs {self.window_size}"
                )
            for i, o in window:
                if i not in inputs:
                    raise UnknownLabelError(f"unknown label '{i}'")
                if o not in outputs:
                    raise UnknownLabelError(f"unknown label '{o}'")

    @property
    def window_size(self) -> int:
        return 2 * self.radius + 1

    def window_key(self, window: Window) -> Tuple[Tuple[int, int], ...]:
        ii = {label: i for i, label in enumerate(self.sigma_in)}
        oi = {label: i for i, label in enumerate(self.sigma_out)}
        return tuple((ii[i], oi[o]) for i, o in window)


@dataclass(frozen=True)
class LabeledInstance:
    topology: Topology
    inputs: Tuple[str, ...]
    ids: Optional[Tuple[int, ...]] = None
    rng_seed: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "topology", Topology(self.topology))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if self.ids is not None:
            object.__setattr__(self, "ids", tuple(int(i) for i in self.ids))

    @classmethod
    def cycle(cls, inputs: Iterable[str], ids: Optional[Iterable[int]] = None,
              rng_seed: Optional[int] = None) -> "LabeledInstance":
        return cls(Topology.CYCLE, tuple(inputs), None if ids is None else tuple(ids), rng_seed)

    @classmethod
    def path(cls, inputs: Iterable[str], ids: Optional[Iterable[int]] = None,
             rng_seed: Optional[int] = None) -> "LabeledInstance":
        return cls(Topology.PATH, tuple(inputs), None if ids is None else tuple(ids), rng_seed)

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def is_cycle(self) -> bool:
        return self.topology is Topology.CYCLE

    def successor(self, i: int) -> Optional[int]:
        if self.is_cycle:
            return (i + 1) % self.n
        return i + 1 if i + 1 < self.n else None

    def edges(self) -> List[Tuple[int, int]]:
        count = self.n if self.is_cycle else max(self.n - 1, 0)
        return [(i, (i + 1) % self.n) for i in range(count)]

    def rotated(self, shift: int) -> "LabeledInstance":
        if not self.is_cycle:
            raise InstanceError("only cycles can be rotated")
        shift %= max(self.n, 1)
        ids = None if self.ids is None else self.ids[shift:] + self.ids[:shift]
        return LabeledInstance(self.topology, self.inputs[shift:] + self.inputs[:shift], ids, self.rng_seed)

    def with_ids(self, ids: Iterable[int]) -> "LabeledInstance":
        return LabeledInstance(self.topology, self.inputs, tuple(ids), self.rng_seed)


def validate_instance(p: NormalLcl, inst: LabeledInstance) -> None:
    if inst.n == 0:
        raise InstanceError("instance has no nodes")
    known = p.input_index
    for i, label in enumerate(inst.inputs):
        if label not in known:
            raise InstanceError(f"input label '{label}' is not in the input alphabet", node=i)
    if inst.ids is not None:
        if len(inst.ids) != inst.n:
            raise InstanceError(f"{len(inst.ids)} ids for {inst.n} nodes")
        if len(set(inst.ids)) != inst.n:
            raise InstanceError("identifiers are not distinct")


def window_letter(window: Window) -> str:
    return "/".join(f"{i}:{o}" for i, o in window)


def normalize(p: GeneralLcl) -> NormalLcl:
    """Encode every accepted window as one output letter of a pairwise problem.

    Two adjacent letters are compatible when the right window is the left one
    shifted by a position and both windows claim the actual center inputs.
    """
    windows = sorted(p.accepted_windows, key=p.window_key)
    if not windows:
        return NormalLcl(p.name, p.sigma_in, (VOID_LETTER,), frozenset())

    r = p.radius
    by_prefix: Dict[Window, List[Window]] = {}
    for w in windows:
        by_prefix.setdefault(w[:-1], []).append(w)

    allowed = set()
    for wu in windows:
        for wv in by_prefix.get(wu[1:], ()):
            allowed.add((wu[r][0], wv[r][0], window_letter(wu), window_letter(wv)))

    return NormalLcl(p.name, p.sigma_in, tuple(window_letter(w) for w in windows), frozenset(allowed))


def project_solution(p: GeneralLcl, np_solution: Sequence[str], n: Optional[int] = None) -> Tuple[str, ...]:
    if not np_solution:
        raise InstanceError("cannot project an empty solution")
    if n is not None and len(np_solution) != n:
        raise InstanceError(f"solution has {len(np_solution)} letters for {n} nodes")
    lookup = {window_letter(w): w for w in p.accepted_windows}
    projected = []
    for i, letter in enumerate(np_solution):
        window = lookup.get(letter)
        if window is None:
            raise InstanceError(f"'{letter}' is not a window letter of '{p.name}'", node=i)
        projected.append(window[p.radius][1])
    return tuple(projected)


def _cyclic_windows(r: int, inputs: Sequence[str], outputs: Sequence[str]) -> List[Window]:
    n = len(inputs)
    if len(outputs) != n:
        raise InstanceError(f"{len(outputs)} outputs for {n} nodes")
    if n < 2 * r + 2:
        raise InstanceError(f"cycle of {n} nodes is too short for radius {r}")
    return [
        tuple((inputs[(i + d) % n], outputs[(i + d) % n]) for d in range(-r, r + 1))
        for i in range(n)
    ]


def general_violations(p: GeneralLcl, inputs: Sequence[str], outputs: Sequence[str]) -> List[int]:
    """Nodes of a cycle whose window is rejected by `p`."""
    return [
        i for i, w in enumerate(_cyclic_windows(p.radius, inputs, outputs))
        if w not in p.accepted_windows
    ]


def lift_solution(p: GeneralLcl, inputs: Sequence[str], outputs: Sequence[str]) -> Tuple[str, ...]:
    lifted = []
    for i, w in enumerate(_cyclic_windows(p.radius, inputs, outputs)):
        if w not in p.accepted_windows:
            raise InstanceError("window is not accepted; outputs do not solve the problem", node=i)
        lifted.append(window_letter(w))
    return tuple(lifted)


def format_block(letters: Sequence[str]) -> str:
    if all(len(letter) == 1 for letter in letters):
        return "".join(letters)
    return " ".join(letters)
