"""Cross-validation of the deciders against the brute-force oracles."""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .blocks import enumerate_block_types
from .catalog import identity_swap, random_problem
from .config import SearchBudget
from .generators import superblock_instance
from .logger import logger
from .mixing import is_mixing
from .oracle import (
    check_deadline,
    find_window_algorithm,
    oracle_block_types,
    oracle_is_mixing,
    oracle_solve,
)
from .problem import LabeledInstance, NormalLcl
from .randomness import INSTANCE_STREAM, PROBLEM_STREAM, make_rng
from .simulator import run_view_algorithm, window_algorithm
from .solver import count_solutions, solve_instance, verify_solution

DEFAULT_CASES = 20
# longest witness the oracle is asked to enumerate up to, for two input letters
MAX_ORACLE_WITNESS = 14


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    skipped: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "skipped": self.skipped,
            "failures": self.failures,
        }


def _random_problems(seed: int, count: int, max_in: int = 2, max_out: int = 3) -> List[NormalLcl]:
    rng = make_rng(seed, PROBLEM_STREAM)
    problems = []
    for number in range(count):
        n_in = int(rng.integers(1, max_in + 1))
        n_out = int(rng.integers(1, max_out + 1))
        density = float(rng.uniform(0.3, 0.8))
        problems.append(random_problem(rng, n_in, n_out, density, name=f"random_{number}"))
    return problems


def _label_pairs(p: NormalLcl, rel) -> frozenset:
    return frozenset(rel.labeled_pairs(p.sigma_out))


def check_atlas(problems: List[NormalLcl], budget: SearchBudget) -> CheckResult:
    result = CheckResult("atlas")
    L = budget.max_block_length
    for p in problems:
        for sigma in p.sigma_in:
            atlas = enumerate_block_types(p, sigma)
            achieved = {_label_pairs(p, rel) for rel in atlas.achievable}
            naive = oracle_block_types(p, sigma, L)
            result.cases += 1
            if not naive <= achieved:
                result.failures.append(f"{p.name}/{sigma}: oracle type missing from the atlas")
            elif atlas.max_witness_length <= L and naive != achieved:
                result.failures.append(f"{p.name}/{sigma}: atlas has types no block up to length {L} realises")
    return result


def check_mixing(problems: List[NormalLcl], budget: SearchBudget) -> CheckResult:
    result = CheckResult("mixing")
    for p in problems:
        needed = max(
            [budget.max_block_length]
            + [enumerate_block_types(p, sigma).max_witness_length for sigma in p.sigma_in]
        )
        if len(p.sigma_in) > 1 and needed > MAX_ORACLE_WITNESS:
            result.skipped += 1
            continue
        result.cases += 1
        fast = is_mixing(p).mixing
        slow = oracle_is_mixing(p, budget, block_length=needed).mixing
        if fast != slow:
            result.failures.append(f"{p.name}: decider says {fast}, oracle says {slow}")
    return result


def check_solver(problems: List[NormalLcl], seed: int, budget: SearchBudget) -> CheckResult:
    result = CheckResult("solver")
    rng = make_rng(seed, INSTANCE_STREAM)
    for p in problems:
        n = int(rng.integers(1, budget.max_instance_n + 1))
        inputs = [p.sigma_in[int(i)] for i in rng.integers(len(p.sigma_in), size=n)]
        inst = LabeledInstance.cycle(inputs) if rng.random() < 0.7 else LabeledInstance.path(inputs)
        result.cases += 1
        everything = oracle_solve(p, inst)
        found = solve_instance(p, inst)
        if (found is None) != (not everything):
            result.failures.append(f"{p.name} n={n}: solver and oracle disagree on solvability")
        elif found is not None and (verify_solution(p, inst, found) or found != min(everything, key=_least_key(p))):
            result.failures.append(f"{p.name} n={n}: witness is invalid or not the least coloring")
        if count_solutions(p, inst) != len(everything):
            result.failures.append(f"{p.name} n={n}: count differs from enumeration")
    return result


def _least_key(p: NormalLcl) -> Callable:
    index = p.output_index
    return lambda coloring: tuple(index[x] for x in coloring)


def check_certification(problems: List[NormalLcl], seed: int, radius: int = 1,
                        runs: int = 5, max_n: int = 200) -> CheckResult:
    result = CheckResult("certification")
    rng = make_rng(seed, INSTANCE_STREAM, 1)
    for p in problems:
        rule = None
        for t in range(radius + 1):
            rule = find_window_algorithm(p, t)
            if rule is not None:
                break
        if rule is None:
            result.skipped += 1
            continue
        alg = window_algorithm(rule)
        for _ in range(runs):
            n = int(rng.integers(2 * rule.radius + 2, max_n + 1))
            inputs = [p.sigma_in[int(i)] for i in rng.integers(len(p.sigma_in), size=n)]
            trace = run_view_algorithm(alg, p, LabeledInstance.cycle(inputs))
            result.cases += 1
            if trace.violations:
                result.failures.append(f"{p.name}: radius-{rule.radius} rule fails on n={n}")
    return result


def check_superblock_parity(max_m: int = 8, max_i: int = 4) -> CheckResult:
    result = CheckResult("superblock_parity")
    p = identity_swap()
    for i_length in range(1, max_i + 1):
        for m in range(2, max_m + 1):
            result.cases += 1
            sat = count_solutions(p, superblock_instance(("I", "S"), i_length, m)) > 0
            if sat != (m % 2 == 0):
                result.failures.append(f"I={i_length} m={m}: solvable={sat}")
    return result


def run_cross_validation(
    seed: int = 0,
    cases: int = DEFAULT_CASES,
    budget: Optional[SearchBudget] = None,
) -> Dict[str, object]:
    """Run every oracle comparison on `cases` seeded random problems."""
    budget = budget or SearchBudget()
    deadline = budget.deadline()
    problems = _random_problems(seed, cases)
    runs = [
        lambda: check_atlas(problems, budget),
        lambda: check_mixing(problems, budget),
        lambda: check_solver(problems, seed, budget),
        lambda: check_certification(problems, seed),
        check_superblock_parity,
    ]
    results = []
    for run in runs:
        check_deadline(deadline, "cross-validation")
        outcome = run()
        logger.info(
            f"check {outcome.name}: {outcome.cases} case(s), {outcome.skipped} skipped, "
            f"{len(outcome.failures)} failure(s)"
        )
        results.append(outcome)
    return {
        "seed": seed,
        "cases": cases,
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
