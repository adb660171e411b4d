import os
import time
from dataclasses import dataclass, field
from typing import Final, Mapping, Optional, Tuple

from .exceptions import ConfigError

# Alphabet limits
MAX_OUTPUT_LABELS: Final[int] = 6  # subpartition enumeration grows super-exponentially past this
ORACLE_MAX_OUTPUT_LABELS: Final[int] = 3
ORACLE_MAX_INPUT_LABELS: Final[int] = 2

# Search budgets
DEFAULT_BUDGET_MS: Final[int] = 600_000
ORACLE_BLOCK_LENGTH: Final[int] = 8
ORACLE_MAX_INSTANCE_N: Final[int] = 10
ORACLE_MAX_COLORINGS: Final[int] = 2_000_000
MAX_RULE_RADIUS: Final[int] = 3
RULE_SEARCH_MAX_NODES: Final[int] = 2_000_000
PROBE_MAX_ASSIGNMENTS: Final[int] = 1_000_000

# Classification
CERTIFY_RADIUS: Final[int] = 1  # O(1) upgrade tried for window rules of radius <= this

# Instance solver
EXACT_COUNT_MAX_N: Final[int] = 10_000

# Simulation
CV_TARGET_COLORS: Final[int] = 6
DEFAULT_SIM_N: Final[int] = 1024
ID_RANGE_EXPONENT: Final[int] = 3  # random ids are drawn from [0, n**3)
MAX_ID: Final[int] = 2**64 - 1

# Sampling
MAX_SEED: Final[int] = 2**64 - 1
DEFAULT_SEED: Final[int] = 0

# Reports
VERSION: Final[str] = "0.1.0"
REPORT_INDENT: Final[int] = 2
VOLATILE_REPORT_KEYS: Final[tuple] = ("wallclock_ms",)

# Environment Variables
ENV_JOBS: Final[str] = "LCLLAB_JOBS"
ENV_BUDGET_MS: Final[str] = "LCLLAB_BUDGET_MS"


@dataclass(frozen=True)
class SearchBudget:
    max_block_length: int = ORACLE_BLOCK_LENGTH
    max_instance_n: int = ORACLE_MAX_INSTANCE_N
    max_rule_radius: int = MAX_RULE_RADIUS
    wallclock_ms: int = DEFAULT_BUDGET_MS

    def __post_init__(self) -> None:
        for name in ("max_block_length", "max_instance_n", "max_rule_radius", "wallclock_ms"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")

    def deadline(self) -> float:
        """Monotonic timestamp after which cooperative searches give up."""
        return time.monotonic() + self.wallclock_ms / 1000.0


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: Tuple[str, ...] = ()
    output: Optional[str] = None
    budget: SearchBudget = field(default_factory=SearchBudget)
    jobs: int = 1
    seed: int = DEFAULT_SEED
    full: bool = False
    cap_out: int = MAX_OUTPUT_LABELS
    verbose: bool = False


def _positive_int(raw: str, source: str) -> int:
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{source} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ConfigError(f"{source} must be positive, got {value}")
    return value


def resolve_run_config(
    command: str,
    inputs: Tuple[str, ...] = (),
    output: Optional[str] = None,
    jobs: Optional[int] = None,
    budget_ms: Optional[int] = None,
    seed: Optional[int] = None,
    cap_out: Optional[int] = None,
    full: bool = False,
    verbose: bool = False,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Build a RunConfig with precedence flags > environment > defaults."""
    env = os.environ if environ is None else environ

    if jobs is None:
        jobs = _positive_int(env[ENV_JOBS], ENV_JOBS) if env.get(ENV_JOBS) else 1
    elif jobs <= 0:
        raise ConfigError(f"--jobs must be positive, got {jobs}")

    if budget_ms is None:
        budget_ms = (
            _positive_int(env[ENV_BUDGET_MS], ENV_BUDGET_MS)
            if env.get(ENV_BUDGET_MS)
            else DEFAULT_BUDGET_MS
        )
    elif budget_ms <= 0:
        raise ConfigError(f"--budget-ms must be positive, got {budget_ms}")

    if seed is None:
        seed = DEFAULT_SEED
    if not 0 <= seed <= MAX_SEED:
        raise ConfigError(f"--seed must fit in 64 bits, got {seed}")

    if cap_out is None:
        cap_out = MAX_OUTPUT_LABELS
    elif cap_out <= 0:
        raise ConfigError(f"--cap-out must be positive, got {cap_out}")

    return RunConfig(
        command=command,
        inputs=tuple(inputs),
        output=output,
        budget=SearchBudget(wallclock_ms=budget_ms),
        jobs=jobs,
        seed=seed,
        full=full,
        cap_out=cap_out,
        verbose=verbose,
    )
