import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from .config import REPORT_INDENT, VERSION, VOLATILE_REPORT_KEYS
from .exceptions import ReportError
from .logger import logger

Report = Dict[str, Any]

RESERVED_KEYS = ("command", "argv", "version", "wallclock_ms")


def build_report(command: str, payload: Dict[str, Any], argv: Sequence[str], wallclock_ms: int) -> Report:
    """Assemble a report in its fixed key order: command, payload, argv, version, wallclock_ms."""
    report: Report = {"command": command}
    for key, value in payload.items():
        if key in RESERVED_KEYS:
            raise ReportError(f"payload key '{key}' collides with a report field")
        report[key] = value
    report["argv"] = list(argv)
    report["version"] = VERSION
    report["wallclock_ms"] = int(wallclock_ms)
    return report


def render_report(report: Report) -> str:
    return json.dumps(report, indent=REPORT_INDENT, ensure_ascii=False) + "\n"


def write_report(report: Report, path: Optional[str] = None) -> None:
    text = render_report(report)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise ReportError(f"cannot write report to {path}: {e}") from e
    logger.info(f"report written to {path}")


def load_report(path: str) -> Report:
    try:
        report = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ReportError(f"cannot read report {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ReportError(f"report {path} is not valid JSON: {e}") from e
    if not isinstance(report, dict) or "command" not in report or "argv" not in report:
        raise ReportError(f"report {path} has no command/argv record")
    return report


def compare_reports(expected: Report, actual: Report) -> List[str]:
    """Keys whose values differ, ignoring volatile fields."""
    keys = [k for k in dict.fromkeys([*expected, *actual]) if k not in VOLATILE_REPORT_KEYS]
    return [k for k in keys if expected.get(k) != actual.get(k)]


def replay(path: str, rerun: Callable[[List[str]], Report]) -> List[str]:
    """Re-run the argv recorded in a report and return the keys that changed."""
    recorded = load_report(path)
    fresh = rerun(list(recorded["argv"]))
    differences = compare_reports(recorded, fresh)
    if differences:
        logger.warning(f"replay of {path} differs in: {', '.join(differences)}")
    return differences
