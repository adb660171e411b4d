"""Built-in problems: the standard examples and random or exhaustive families."""

from itertools import permutations, product
from typing import Callable, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np

from .problem import GeneralLcl, NormalLcl, Window


def two_coloring() -> NormalLcl:
    return NormalLcl("two_coloring", ("u",), ("W", "B"),
                     frozenset({("u", "u", "W", "B"), ("u", "u", "B", "W")}))


def three_coloring() -> NormalLcl:
    colors = ("1", "2", "3")
    return NormalLcl("three_coloring", ("u",), colors,
                     frozenset(("u", "u", x, y) for x in colors for y in colors if x != y))


def mark_kth(k: int = 3) -> NormalLcl:
    """Every k-th node marked: outputs count positions modulo k along the orientation."""
    states = tuple(str(i) for i in range(1, k + 1))
    return NormalLcl(f"mark_kth_{k}", ("u",), states,
                     frozenset(("u", "u", states[i], states[(i + 1) % k]) for i in range(k)))


def all_red() -> NormalLcl:
    """All nodes red or all nodes green."""
    return NormalLcl("all_red", ("u",), ("R", "G"),
                     frozenset({("u", "u", "R", "R"), ("u", "u", "G", "G")}))


def maximal_independent_set() -> NormalLcl:
    # 1 = in the set; a and b are outside it and b is always followed by a set node
    edges = {("1", "a"), ("1", "b"), ("a", "1"), ("a", "b"), ("b", "1")}
    return NormalLcl("maximal_independent_set", ("u",), ("1", "a", "b"),
                     frozenset(("u", "u", x, y) for x, y in edges))


def trivially_true(n_in: int = 1, n_out: int = 1) -> NormalLcl:
    sigma_in = ("u",) if n_in == 1 else tuple(f"i{j}" for j in range(n_in))
    sigma_out = ("x",) if n_out == 1 else tuple(f"o{j}" for j in range(n_out))
    allowed = frozenset(product(sigma_in, sigma_in, sigma_out, sigma_out))
    return NormalLcl("trivially_true", sigma_in, sigma_out, allowed)


def copy_input() -> NormalLcl:
    """Every node outputs its own input letter."""
    letters = ("a", "b")
    return NormalLcl("copy_input", letters, letters,
                     frozenset((x, y, x, y) for x in letters for y in letters))


def three_coloring_of_blocks() -> NormalLcl:
    """L starts a new block: equal colors inside a block, different across a boundary."""
    colors = ("R", "G", "B")
    allowed = set()
    for left in ("L", "∅"):
        for x in colors:
            allowed.add((left, "∅", x, x))
            allowed.update((left, "L", x, y) for y in colors if y != x)
    return NormalLcl("three_coloring_of_blocks", ("L", "∅"), colors, frozenset(allowed))


def permutation_problem(perms: Mapping[str, Sequence[int]], name: str = "permutation") -> NormalLcl:
    """Edge-labelled permutation problem, each label written on the edge's right endpoint.

    Output y follows output x across an edge into a node labelled b iff
    perms[b] maps x to y.
    """
    degree = len(next(iter(perms.values())))
    outputs = tuple(str(i) for i in range(degree))
    allowed = frozenset(
        (a, b, outputs[x], outputs[perm[x]])
        for a in perms for b, perm in perms.items() for x in range(degree)
    )
    return NormalLcl(name, tuple(perms), outputs, allowed)


def identity_swap() -> NormalLcl:
    return permutation_problem({"I": (0, 1), "S": (1, 0)}, "identity_swap")


def common_fixed_point(perms: Sequence[Sequence[int]]) -> Optional[int]:
    """Least point fixed by all permutations; the permutation problem is then solved by outputting it."""
    degree = len(perms[0])
    for x in range(degree):
        if all(perm[x] == x for perm in perms):
            return x
    return None


def general_from_predicate(
    name: str,
    sigma_in: Sequence[str],
    sigma_out: Sequence[str],
    radius: int,
    accept: Callable[[Window], bool],
) -> GeneralLcl:
    pairs = list(product(sigma_in, sigma_out))
    windows = frozenset(w for w in product(pairs, repeat=2 * radius + 1) if accept(w))
    return GeneralLcl(name, tuple(sigma_in), tuple(sigma_out), radius, windows)


def general_two_coloring() -> GeneralLcl:
    return general_from_predicate(
        "two_coloring_r1", ("u",), ("W", "B"), 1,
        lambda w: w[0][1] != w[1][1] and w[1][1] != w[2][1],
    )


def general_three_coloring() -> GeneralLcl:
    return general_from_predicate(
        "three_coloring_r1", ("u",), ("1", "2", "3"), 1,
        lambda w: w[0][1] != w[1][1] and w[1][1] != w[2][1],
    )


def general_mark_kth(k: int = 3) -> GeneralLcl:
    states = [str(i) for i in range(1, k + 1)]
    succ = {states[i]: states[(i + 1) % k] for i in range(k)}
    return general_from_predicate(
        f"mark_kth_{k}_r1", ("u",), states, 1,
        lambda w: succ[w[0][1]] == w[1][1] and succ[w[1][1]] == w[2][1],
    )


def general_all_red() -> GeneralLcl:
    return general_from_predicate(
        "all_red_r1", ("u",), ("R", "G"), 1,
        lambda w: w[0][1] == w[1][1] == w[2][1],
    )


def problem_from_mask(sigma_in: Sequence[str], sigma_out: Sequence[str], mask: int,
                      name: Optional[str] = None) -> NormalLcl:
    """Bit i of `mask` allows the i-th quadruple in canonical order."""
    quads = list(product(sigma_in, sigma_in, sigma_out, sigma_out))
    allowed = frozenset(q for i, q in enumerate(quads) if mask >> i & 1)
    return NormalLcl(name or f"mask_{mask}", tuple(sigma_in), tuple(sigma_out), allowed)


def random_problem(rng: np.random.Generator, n_in: int, n_out: int, density: float = 0.5,
                   name: Optional[str] = None) -> NormalLcl:
    sigma_in = tuple("abcdefgh"[:n_in])
    sigma_out = tuple(str(i) for i in range(n_out))
    quads = list(product(sigma_in, sigma_in, sigma_out, sigma_out))
    keep = rng.random(len(quads)) < density
    return NormalLcl(name or "random", sigma_in, sigma_out,
                     frozenset(q for q, k in zip(quads, keep) if k))


def canonical_form(p: NormalLcl) -> Tuple[int, int, Tuple[Tuple[int, int, int, int], ...]]:
    """Relabeling-invariant key: least sorted index encoding over all alphabet permutations."""
    ii, oi = p.input_index, p.output_index
    encoded = [(ii[a], ii[b], oi[x], oi[y]) for a, b, x, y in p.allowed]
    best = None
    for pin in permutations(range(len(p.sigma_in))):
        for pout in permutations(range(len(p.sigma_out))):
            key = tuple(sorted((pin[a], pin[b], pout[x], pout[y]) for a, b, x, y in encoded))
            if best is None or key < best:
                best = key
    return len(p.sigma_in), len(p.sigma_out), best


def exhaustive_family(n_in: int, n_out: int) -> Iterator[NormalLcl]:
    """Every allowed-set over the given alphabet sizes, one per relabeling class."""
    sigma_in = tuple("ab"[:n_in]) if n_in <= 2 else tuple(f"i{j}" for j in range(n_in))
    sigma_out = tuple(str(i) for i in range(n_out))
    seen = set()
    for mask in range(2 ** (n_in * n_in * n_out * n_out)):
        p = problem_from_mask(sigma_in, sigma_out, mask)
        key = canonical_form(p)
        if key not in seen:
            seen.add(key)
            yield p


BUILTIN_PROBLEMS = {
    "two_coloring": two_coloring,
    "three_coloring": three_coloring,
    "mark_kth_3": mark_kth,
    "all_red": all_red,
    "maximal_independent_set": maximal_independent_set,
    "trivially_true": trivially_true,
    "copy_input": copy_input,
    "three_coloring_of_blocks": three_coloring_of_blocks,
    "identity_swap": identity_swap,
}
