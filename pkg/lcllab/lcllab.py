from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from .automaton import build_automaton, classify_no_input
from .classifier import classify
from .config import EXACT_COUNT_MAX_N, RunConfig, SearchBudget
from .exceptions import InstanceError, SimulationError
from .generators import BlockFamily, MarkovChainSpec, sample_chain, superblock_instance
from .logger import logger
from .oracle import find_window_algorithm
from .problem import GeneralLcl, LabeledInstance, NormalLcl, normalize, project_solution
from .problem_io import Problem, serialize_instance, serialize_problem
from .randomness import INSTANCE_STREAM, make_rng, random_ids
from .simulator import (
    constant_algorithm,
    copy_algorithm,
    majority_algorithm,
    probe_locality,
    ruling_trace,
    run_view_algorithm,
    solve_ergodic,
    window_algorithm,
)
from .solver import count_solutions, solve_instance, verify_solution
from .validation import DEFAULT_CASES, run_cross_validation

ALGORITHMS = ("view", "ruling", "ergodic")
VIEW_RULES = ("window", "constant", "copy", "majority")


class LclLab:
    """Entry point tying problems, instances and analyses together.

    Every method returns the payload of a JSON report; domain errors
    propagate as LclLabError subclasses.
    """

    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or RunConfig(command="api")
        logger.debug(
            f"LclLab ready: jobs={self.config.jobs} seed={self.config.seed} cap_out={self.config.cap_out}"
        )

    @property
    def budget(self) -> SearchBudget:
        return self.config.budget

    @staticmethod
    def normal_form(p: Problem) -> NormalLcl:
        return normalize(p) if isinstance(p, GeneralLcl) else p

    def classify(self, p: Problem) -> Dict[str, Any]:
        normal = self.normal_form(p)
        logger.info(f"classifying '{normal.name}' ({len(normal.sigma_in)} inputs, {len(normal.sigma_out)} outputs)")
        report = classify(
            normal,
            cap=self.config.cap_out,
            full=self.config.full,
            jobs=self.config.jobs,
            budget=self.budget,
        )
        data = report.to_dict(self.config.full)
        data["normalized"] = isinstance(p, GeneralLcl)
        return data

    def normalize(self, p: Problem) -> Dict[str, Any]:
        normal = self.normal_form(p)
        return {
            "problem": normal.name,
            "inputs": list(normal.sigma_in),
            "outputs": len(normal.sigma_out),
            "allowed": len(normal.allowed),
            "normal_form": serialize_problem(normal),
        }

    def solve(self, p: Problem, inst: LabeledInstance) -> Dict[str, Any]:
        normal = self.normal_form(p)
        coloring = solve_instance(normal, inst)
        violations = [] if coloring is None else verify_solution(normal, inst, coloring)
        if coloring is not None and isinstance(p, GeneralLcl):
            coloring = project_solution(p, coloring, inst.n)
        count = count_solutions(normal, inst) if inst.n <= EXACT_COUNT_MAX_N else None
        logger.info(f"'{normal.name}' on {inst.topology.value} of {inst.n}: {'UNSAT' if coloring is None else 'SAT'}")
        return {
            "problem": normal.name,
            "topology": inst.topology.value,
            "n": inst.n,
            "sat": coloring is not None,
            "coloring": None if coloring is None else list(coloring),
            "violations": violations,
            "solutions": count,
        }

    def instance_for(self, p: Optional[NormalLcl], n: int, inst: Optional[LabeledInstance] = None) -> LabeledInstance:
        """The given instance, or a seeded random cycle of n nodes; ids and seed are filled in when absent."""
        seed = self.config.seed
        if inst is None:
            letters = ("u",) if p is None else p.sigma_in
            rng = make_rng(seed, INSTANCE_STREAM)
            inputs = [letters[int(i)] for i in rng.integers(len(letters), size=n)]
            inst = LabeledInstance.cycle(inputs)
        if inst.ids is None:
            inst = inst.with_ids(random_ids(inst.n, seed))
        if inst.rng_seed is None:
            inst = LabeledInstance(inst.topology, inst.inputs, inst.ids, seed)
        return inst

    def _view_algorithm(self, p: NormalLcl, rule: str, t: int):
        if rule == "constant":
            return constant_algorithm(p.sigma_out[0])
        if rule == "copy":
            return copy_algorithm(p)
        if rule == "majority":
            return majority_algorithm(p)
        if rule == "window":
            window = find_window_algorithm(p, t, deadline=self.budget.deadline())
            if window is None:
                raise SimulationError(f"no input-only rule of radius {t} solves '{p.name}'")
            return window_algorithm(window)
        raise SimulationError(f"unknown view rule '{rule}'")

    def simulate(
        self,
        p: Optional[Problem],
        alg: str,
        n: int,
        inst: Optional[LabeledInstance] = None,
        k: int = 2,
        t: int = 0,
        rule: str = "window",
    ) -> Dict[str, Any]:
        normal = None if p is None else self.normal_form(p)
        if alg != "ruling" and normal is None:
            raise SimulationError(f"algorithm '{alg}' needs a problem")
        inst = self.instance_for(normal, n, inst)

        if alg == "ruling":
            trace = ruling_trace(inst, k)
        elif alg == "view":
            trace = run_view_algorithm(self._view_algorithm(normal, rule, t), normal, inst)
        elif alg == "ergodic":
            trace = solve_ergodic(normal, inst, classify_no_input(build_automaton(normal)))
        else:
            raise SimulationError(f"unknown algorithm '{alg}'")
        data: Dict[str, Any] = {"problem": None if normal is None else normal.name}
        data.update(trace.to_dict())
        return data

    def probe(self, p: Problem, instances: Iterable[LabeledInstance], t_max: int) -> Dict[str, Any]:
        normal = self.normal_form(p)
        rows = probe_locality(normal, instances, t_max)
        return {"problem": normal.name, "rows": [row.to_dict() for row in rows]}

    def generate_chain(self, family: BlockFamily, n: int) -> Tuple[LabeledInstance, Dict[str, Any]]:
        sample = sample_chain(MarkovChainSpec(family), n, self.config.seed)
        data: Dict[str, Any] = {"kind": "chain", "family": family.name, "seed": self.config.seed}
        data.update(sample.to_dict())
        data["instance"] = serialize_instance(sample.instance)
        return sample.instance, data

    def generate_superblock(self, labels: Sequence[str], i_length: int, m: int) -> Tuple[LabeledInstance, Dict[str, Any]]:
        if len(labels) != 2:
            raise InstanceError(f"need an identity and a swap letter, got {len(labels)} label(s)")
        inst = superblock_instance(tuple(labels), i_length, m)
        data = {
            "kind": "superblock",
            "labels": list(labels),
            "superblock_length": i_length,
            "superblocks": m,
            "n": inst.n,
            "instance": serialize_instance(inst),
        }
        return inst, data

    def check(self, cases: int = DEFAULT_CASES) -> Dict[str, Any]:
        return run_cross_validation(self.config.seed, cases, self.budget)
