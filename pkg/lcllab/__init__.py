from .lcllab import LclLab
from .classifier import ClassReport, ComplexityClass, classify
from .config import VERSION
from .exceptions import (
    LclLabError,
    BudgetExceededError,
    CapExceededError,
    CertificateError,
    InconsistencyError,
    InstanceError,
    ProblemSyntaxError,
    SimulationError,
)
from .problem import GeneralLcl, LabeledInstance, NormalLcl, normalize

__version__ = VERSION
__all__ = [
    "LclLab",
    "ClassReport",
    "ComplexityClass",
    "classify",
    "normalize",
    "GeneralLcl",
    "LabeledInstance",
    "NormalLcl",
    "LclLabError",
    "BudgetExceededError",
    "CapExceededError",
    "CertificateError",
    "InconsistencyError",
    "InstanceError",
    "ProblemSyntaxError",
    "SimulationError",
]
