from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

from .automaton import NoInputClass, NoInputVerdict, build_automaton, classify_no_input
from .config import CERTIFY_RADIUS, MAX_OUTPUT_LABELS, SearchBudget
from .exceptions import BudgetExceededError, InconsistencyError
from .logger import logger
from .mixing import MixingVerdict, is_mixing
from .oracle import WindowRule, find_window_algorithm
from .problem import NormalLcl


class ComplexityClass(str, Enum):
    O1 = "O1"
    LOGSTAR = "LOGSTAR"
    BOREL = "BOREL"
    GLOBAL = "GLOBAL"


_FROM_NO_INPUT = {
    NoInputClass.CONSTANT_O1: ComplexityClass.O1,
    NoInputClass.LOGSTAR: ComplexityClass.LOGSTAR,
    NoInputClass.GLOBAL: ComplexityClass.GLOBAL,
}


@dataclass(frozen=True)
class ClassReport:
    problem: str
    complexity: ComplexityClass
    mixing: Optional[MixingVerdict] = None
    no_input: Optional[NoInputVerdict] = None
    window_rule: Optional[WindowRule] = None

    @property
    def certified_radius(self) -> Optional[int]:
        return None if self.window_rule is None else self.window_rule.radius

    def to_dict(self, full: bool = False) -> Dict[str, object]:
        data: Dict[str, object] = {
            "problem": self.problem,
            "mixing": None if self.mixing is None else self.mixing.mixing,
            "class": self.complexity.value,
        }
        if self.no_input is not None:
            data["no_input_class"] = self.no_input.to_dict()
        data["certified_radius"] = self.certified_radius
        if self.window_rule is not None and full:
            data["window_rule"] = self.window_rule.to_dict()
        if self.mixing is not None:
            mixing = self.mixing.to_dict(full)
            data["witness"] = mixing["witness"]
            data["unsolvable_instance"] = self.mixing.unsolvable_instance
            data["candidates_checked"] = mixing["candidates_checked"]
            if full:
                data["summary"] = mixing["summary"]
        return data


def _certify(p: NormalLcl, radius: int, budget: SearchBudget) -> Optional[WindowRule]:
    deadline = budget.deadline()
    for t in range(min(radius, budget.max_rule_radius) + 1):
        try:
            rule = find_window_algorithm(p, t, deadline=deadline)
        except BudgetExceededError as e:
            logger.warning(f"constant-round certification of '{p.name}' stopped at radius {t}: {e}")
            return None
        if rule is not None:
            return rule
    return None


def classify(
    p: NormalLcl,
    cap: Optional[int] = None,
    full: bool = False,
    jobs: int = 1,
    budget: Optional[SearchBudget] = None,
    certify_radius: int = CERTIFY_RADIUS,
) -> ClassReport:
    """Complexity class of `p` on cycles.

    Without inputs the automaton verdict is final and must agree with the
    mixing decider. With inputs only BOREL and GLOBAL are decided; a BOREL
    problem is reported as O1 when an input-only window rule of radius at most
    `certify_radius` solves every input labeling.
    """
    cap = MAX_OUTPUT_LABELS if cap is None else cap
    budget = budget or SearchBudget()

    if len(p.sigma_in) == 1:
        verdict = classify_no_input(build_automaton(p))
        mixing = None
        if len(p.sigma_out) <= cap:
            mixing = is_mixing(p, cap, full, jobs)
            if mixing.mixing != (verdict.complexity is NoInputClass.GLOBAL):
                raise InconsistencyError(
                    f"'{p.name}': automaton says {verdict.complexity.value} "
                    f"but the mixing decider says mixing={mixing.mixing}"
                )
        else:
            logger.info(f"'{p.name}' has {len(p.sigma_out)} outputs; mixing cross-check skipped")
        return ClassReport(p.name, _FROM_NO_INPUT[verdict.complexity], mixing, verdict)

    mixing = is_mixing(p, cap, full, jobs)
    if mixing.mixing:
        return ClassReport(p.name, ComplexityClass.GLOBAL, mixing)
    rule = _certify(p, certify_radius, budget)
    if rule is not None:
        return ClassReport(p.name, ComplexityClass.O1, mixing, window_rule=rule)
    return ClassReport(p.name, ComplexityClass.BOREL, mixing)
