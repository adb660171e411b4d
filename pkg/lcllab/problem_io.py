import re
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .exceptions import DuplicateLabelError, ProblemSyntaxError, UnknownLabelError
from .generators import BlockFamily
from .problem import WINDOW_SEPARATORS, GeneralLcl, LabeledInstance, NormalLcl, Topology

Problem = Union[GeneralLcl, NormalLcl]

LABEL = r"[^\s,|()#]+"
HEADER_RE = re.compile(r"^problem\s+(\S+)$")
INSTANCE_HEADER_RE = re.compile(r"^instance\s+(cycle|path)\s+(\d+)$")
FAMILY_HEADER_RE = re.compile(r"^family\s+(\S+)$")
FIELD_RE = re.compile(r"^([a-z]+)\s*:\s*(.*)$")
ALLOW_RE = re.compile(
    rf"^\(\s*({LABEL})\s*,\s*({LABEL})\s*\|\s*({LABEL})\s*,\s*({LABEL})\s*\)$"
)
PAIR_RE = re.compile(rf"\(\s*({LABEL})\s*,\s*({LABEL})\s*\)")
PAIRS_RE = re.compile(rf"^(?:\s*\(\s*{LABEL}\s*,\s*{LABEL}\s*\))+\s*$")
TOKEN_RE = re.compile(r"\S+")


class _Line:
    """A non-blank source line with comments stripped, plus its position."""

    def __init__(self, number: int, raw: str):
        text = raw.split("#", 1)[0].rstrip()
        self.number = number
        self.indent = len(text) - len(text.lstrip())
        self.text = text.strip()

    def error(self, message: str, offset: int = 0, kind=ProblemSyntaxError) -> ProblemSyntaxError:
        return kind(message, self.number, self.indent + offset + 1)


def _lines(text: str) -> List[_Line]:
    lines = [_Line(i, raw) for i, raw in enumerate(text.splitlines(), start=1)]
    return [line for line in lines if line.text]


def _field(line: _Line) -> Tuple[str, str, int]:
    m = FIELD_RE.match(line.text)
    if not m:
        raise line.error(f"unrecognized line '{line.text}'")
    return m.group(1), m.group(2), m.start(2)


def _tokens(value: str, base: int) -> List[Tuple[str, int]]:
    return [(m.group(0), base + m.start()) for m in TOKEN_RE.finditer(value)]


def _alphabet(line: _Line, value: str, base: int, what: str) -> Tuple[str, ...]:
    labels: List[str] = []
    for token, offset in _tokens(value, base):
        if not re.fullmatch(LABEL, token):
            raise line.error(f"invalid label '{token}'", offset)
        if token in labels:
            raise line.error(f"duplicate {what} label '{token}'", offset, DuplicateLabelError)
        labels.append(token)
    if not labels:
        raise line.error(f"{what} alphabet is empty", base)
    return tuple(labels)


def _check_label(line: _Line, label: str, offset: int, alphabet: Optional[Sequence[str]], what: str) -> None:
    if alphabet is None:
        raise line.error(f"'{what}s:' must be declared before use", offset)
    if label not in alphabet:
        raise line.error(f"unknown label '{label}'", offset, UnknownLabelError)


def parse_problem(text: str) -> Problem:
    """Parse a problem file; the absence of a `radius` clause means normal form."""
    lines = _lines(text)
    if not lines:
        raise ProblemSyntaxError("empty problem file", 1, 1)
    head = lines[0]
    m = HEADER_RE.match(head.text)
    if not m:
        raise head.error("expected 'problem <name>'")
    name = m.group(1)

    sigma_in: Optional[Tuple[str, ...]] = None
    sigma_out: Optional[Tuple[str, ...]] = None
    radius: Optional[int] = None
    radius_line: Optional[_Line] = None
    allowed = set()
    windows: List[Tuple[_Line, tuple]] = []
    declared: List[Tuple[_Line, str, int]] = []

    for line in lines[1:]:
        key, value, base = _field(line)
        if key in ("inputs", "outputs"):
            if (sigma_in if key == "inputs" else sigma_out) is not None:
                raise line.error(f"'{key}:' declared twice")
            labels = _alphabet(line, value, base, key[:-1])
            declared.append((line, value, base))
            if key == "inputs":
                sigma_in = labels
            else:
                sigma_out = labels
        elif key == "radius":
            if radius is not None:
                raise line.error("'radius:' declared twice")
            if not re.fullmatch(r"\d+", value):
                raise line.error(f"radius must be a non-negative integer, got '{value}'", base)
            radius, radius_line = int(value), line
        elif key == "allow":
            am = ALLOW_RE.match(value)
            if not am:
                raise line.error("expected 'allow: (inL,inR | outL,outR)'", base)
            for group, alphabet, what in ((1, sigma_in, "input"), (2, sigma_in, "input"),
                                          (3, sigma_out, "output"), (4, sigma_out, "output")):
                _check_label(line, am.group(group), base + am.start(group), alphabet, what)
            allowed.add(am.groups())
        elif key == "window":
            if not PAIRS_RE.match(value):
                raise line.error("expected 'window: (i,o) (i,o) ...'", base)
            window = []
            for pm in PAIR_RE.finditer(value):
                _check_label(line, pm.group(1), base + pm.start(1), sigma_in, "input")
                _check_label(line, pm.group(2), base + pm.start(2), sigma_out, "output")
                window.append((pm.group(1), pm.group(2)))
            windows.append((line, tuple(window)))
        else:
            raise line.error(f"unknown clause '{key}:'")

    last = lines[-1]
    if sigma_in is None:
        raise ProblemSyntaxError("missing 'inputs:' clause", last.number, 1)
    if sigma_out is None:
        raise ProblemSyntaxError("missing 'outputs:' clause", last.number, 1)

    if radius is None:
        if windows:
            raise windows[0][0].error("window lines require a 'radius:' clause")
        return NormalLcl(name, sigma_in, sigma_out, frozenset(allowed))

    if allowed:
        raise radius_line.error("'allow:' lines cannot be combined with 'radius:'")
    for line, value, base in declared:
        for token, offset in _tokens(value, base):
            if any(ch in token for ch in WINDOW_SEPARATORS):
                raise line.error(f"label '{token}' of a radius problem contains '/' or ':'", offset)
    for line, window in windows:
        if len(window) != 2 * radius + 1:
            raise line.error(f"window has {len(window)} pairs, radius {radius} needs {2 * radius + 1}")
    return GeneralLcl(name, sigma_in, sigma_out, radius, frozenset(w for _, w in windows))


def serialize_problem(p: Problem) -> str:
    lines = [
        f"problem {p.name}",
        f"inputs: {' '.join(p.sigma_in)}",
        f"outputs: {' '.join(p.sigma_out)}",
    ]
    if isinstance(p, GeneralLcl):
        lines.append(f"radius: {p.radius}")
        for window in sorted(p.accepted_windows, key=p.window_key):
            lines.append("window: " + " ".join(f"({i},{o})" for i, o in window))
    else:
        ii, oi = p.input_index, p.output_index
        for a, b, x, y in sorted(p.allowed, key=lambda q: (ii[q[0]], ii[q[1]], oi[q[2]], oi[q[3]])):
            lines.append(f"allow: ({a},{b} | {x},{y})")
    return "\n".join(lines) + "\n"


def _sequence(line: _Line, value: str, base: int, count: Optional[int]) -> List[str]:
    tokens = [token for token, _ in _tokens(value, base)]
    # a lone token stands for a string of single-character labels
    if len(tokens) == 1 and count is not None and count > 1 and len(tokens[0]) == count:
        return list(tokens[0])
    if len(tokens) == 1 and count is None and len(tokens[0]) > 1:
        return list(tokens[0])
    return tokens


def parse_instance(text: str) -> LabeledInstance:
    lines = _lines(text)
    if not lines:
        raise ProblemSyntaxError("empty instance file", 1, 1)
    head = lines[0]
    m = INSTANCE_HEADER_RE.match(head.text)
    if not m:
        raise head.error("expected 'instance <cycle|path> <n>'")
    topology, n = Topology(m.group(1)), int(m.group(2))
    if n < 1:
        raise head.error("instance needs at least one node")

    inputs: Optional[List[str]] = None
    ids: Optional[List[int]] = None
    seed: Optional[int] = None
    for line in lines[1:]:
        key, value, base = _field(line)
        if key == "inputs":
            inputs = _sequence(line, value, base, n)
            if len(inputs) != n:
                raise line.error(f"{len(inputs)} input labels for {n} nodes", base)
        elif key == "ids":
            try:
                ids = [int(token) for token, _ in _tokens(value, base)]
            except ValueError:
                raise line.error("ids must be integers", base) from None
            if len(ids) != n:
                raise line.error(f"{len(ids)} ids for {n} nodes", base)
            if len(set(ids)) != n:
                raise line.error("duplicate ids", base)
        elif key == "seed":
            if not re.fullmatch(r"\d+", value) or int(value) >= 2**64:
                raise line.error(f"seed must be an unsigned 64-bit integer, got '{value}'", base)
            seed = int(value)
        else:
            raise line.error(f"unknown clause '{key}:'")

    if inputs is None:
        raise ProblemSyntaxError("missing 'inputs:' clause", lines[-1].number, 1)
    return LabeledInstance(topology, tuple(inputs), None if ids is None else tuple(ids), seed)


def serialize_instance(inst: LabeledInstance) -> str:
    lines = [f"instance {inst.topology.value} {inst.n}", f"inputs: {' '.join(inst.inputs)}"]
    if inst.ids is not None:
        lines.append(f"ids: {' '.join(str(i) for i in inst.ids)}")
    if inst.rng_seed is not None:
        lines.append(f"seed: {inst.rng_seed}")
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> BlockFamily:
    lines = _lines(text)
    if not lines:
        raise ProblemSyntaxError("empty family file", 1, 1)
    head = lines[0]
    m = FAMILY_HEADER_RE.match(head.text)
    if not m:
        raise head.error("expected 'family <name>'")
    anchor: Optional[str] = None
    blocks: List[Tuple[str, ...]] = []
    for line in lines[1:]:
        key, value, base = _field(line)
        if key == "anchor":
            if not re.fullmatch(LABEL, value):
                raise line.error(f"invalid anchor '{value}'", base)
            anchor = value
        elif key == "block":
            blocks.append(tuple(_sequence(line, value, base, None)))
        else:
            raise line.error(f"unknown clause '{key}:'")
    if anchor is None:
        raise ProblemSyntaxError("missing 'anchor:' clause", lines[-1].number, 1)
    return BlockFamily(m.group(1), anchor, tuple(blocks))


def serialize_family(family: BlockFamily) -> str:
    lines = [f"family {family.name}", f"anchor: {family.anchor}"]
    lines.extend(f"block: {' '.join(block)}" for block in family.blocks)
    return "\n".join(lines) + "\n"


def load_problem(path: Union[str, Path]) -> Problem:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def load_instance(path: Union[str, Path]) -> LabeledInstance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def load_family(path: Union[str, Path]) -> BlockFamily:
    return parse_family(Path(path).read_text(encoding="utf-8"))
