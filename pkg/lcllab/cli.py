import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .config import DEFAULT_SIM_N, RunConfig, resolve_run_config
from .exceptions import ConfigError, LclLabError
from .lcllab import ALGORITHMS, VIEW_RULES, LclLab
from .logger import logger, setup_logger
from .problem_io import load_family, load_instance, load_problem
from .report import build_report, replay, write_report
from .validation import DEFAULT_CASES


# Terminal color codes
class Colors:
    """ANSI color codes for terminal output."""
    RED = "\033[91m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    CYAN = "\033[96m"
    RESET = "\033[0m"


class UsageError(Exception):
    pass


def _common_options() -> argparse.ArgumentParser:
    # defaults are suppressed so options given before the subcommand survive its parser
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--out", type=str, help="Write the JSON report here instead of stdout")
    common.add_argument("--full", action="store_true", help="Include exhaustive summaries in the report")
    common.add_argument("--jobs", type=int, help="Worker processes (default: $LCLLAB_JOBS or 1)")
    common.add_argument("--seed", type=int, help="Unsigned 64-bit seed (default: 0)")
    common.add_argument("--cap-out", type=int, help="Largest output alphabet the mixing decider accepts")
    common.add_argument("--budget-ms", type=int, help="Wallclock budget for searches (default: $LCLLAB_BUDGET_MS)")
    common.add_argument("--verbose", action="store_true", help="Log debug output to stderr")
    return common


def create_argument_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="lcllab",
        description="lcllab - round complexity of locally checkable labelings on cycles",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
        epilog="""
Examples:
  lcllab classify problems/two_coloring.lcl
  lcllab solve problems/two_coloring.lcl problems/cycle5.inst
  lcllab simulate problems/three_coloring.lcl --alg ergodic --n 4096 --seed 7
  lcllab gen --superblock 3 5 --emit hard.inst
  lcllab --replay report.json
        """
    )
    parser.add_argument("--replay", type=str, metavar="REPORT",
                        help="Re-run the command recorded in REPORT and compare the results")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("classify", parents=[common], help="Decide the complexity class of a problem")
    p.add_argument("problem", help="Problem file")

    p = sub.add_parser("normalize", parents=[common], help="Rewrite a radius-r problem in pairwise normal form")
    p.add_argument("problem", help="Problem file")

    p = sub.add_parser("solve", parents=[common], help="Solve one finite cycle or path instance")
    p.add_argument("problem", help="Problem file")
    p.add_argument("instance", help="Instance file")

    p = sub.add_parser("simulate", parents=[common], help="Run a LOCAL algorithm on a cycle")
    p.add_argument("problem", nargs="?", help="Problem file (not needed for --alg ruling)")
    p.add_argument("--alg", choices=ALGORITHMS, required=True, help="Algorithm to run")
    p.add_argument("--rule", choices=VIEW_RULES, default="window", help="View rule for --alg view (default: window)")
    p.add_argument("--k", type=int, default=2, help="Ruling-set spacing k (default: 2)")
    p.add_argument("--t", type=int, default=0, help="View radius for --alg view (default: 0)")
    p.add_argument("--n", type=int, default=DEFAULT_SIM_N, help=f"Cycle length without --instance (default: {DEFAULT_SIM_N})")
    p.add_argument("--instance", type=str, help="Instance file to run on")

    p = sub.add_parser("gen", parents=[common], help="Generate an adversarial instance")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", type=str, help="Block family file for the Markov-chain sampler")
    source.add_argument("--superblock", type=int, nargs=2, metavar=("I", "M"),
                        help="M superblocks of I nodes each")
    p.add_argument("--labels", nargs=2, default=["I", "S"], metavar=("ID", "SWAP"),
                   help="Identity and swap letters for --superblock (default: I S)")
    p.add_argument("--n", type=int, default=DEFAULT_SIM_N, help="Target length for --family")
    p.add_argument("--emit", type=str, help="Write the instance file here")

    p = sub.add_parser("check", parents=[common], help="Cross-validate every decider against brute force")
    p.add_argument("--cases", type=int, default=DEFAULT_CASES, help=f"Random problems per check (default: {DEFAULT_CASES})")

    return parser


def _opt(args: argparse.Namespace, name: str, default: Any = None) -> Any:
    return getattr(args, name, default)


def _require_files(*paths: Optional[str]) -> None:
    for path in paths:
        if path is not None and not Path(path).is_file():
            raise UsageError(f"File not found: {path}")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    inputs = tuple(
        getattr(args, name) for name in ("problem", "instance", "family")
        if getattr(args, name, None) is not None
    )
    try:
        return resolve_run_config(
            command=args.command,
            inputs=inputs,
            output=_opt(args, "out"),
            jobs=_opt(args, "jobs"),
            budget_ms=_opt(args, "budget_ms"),
            seed=_opt(args, "seed"),
            cap_out=_opt(args, "cap_out"),
            full=_opt(args, "full", False),
            verbose=_opt(args, "verbose", False),
        )
    except ConfigError as e:
        raise UsageError(str(e)) from e


def execute(args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
    """Run a parsed command and return its payload plus the exit code it implies."""
    lab = LclLab(resolve_config(args))
    command = args.command

    if command == "classify":
        _require_files(args.problem)
        return lab.classify(load_problem(args.problem)), 0
    if command == "normalize":
        _require_files(args.problem)
        return lab.normalize(load_problem(args.problem)), 0
    if command == "solve":
        _require_files(args.problem, args.instance)
        return lab.solve(load_problem(args.problem), load_instance(args.instance)), 0
    if command == "simulate":
        _require_files(args.problem, args.instance)
        problem = None if args.problem is None else load_problem(args.problem)
        inst = None if args.instance is None else load_instance(args.instance)
        return lab.simulate(problem, args.alg, args.n, inst, k=args.k, t=args.t, rule=args.rule), 0
    if command == "gen":
        if args.family is not None:
            _require_files(args.family)
            _, payload = lab.generate_chain(load_family(args.family), args.n)
        else:
            i_length, m = args.superblock
            _, payload = lab.generate_superblock(args.labels, i_length, m)
        if args.emit:
            try:
                Path(args.emit).write_text(payload["instance"], encoding="utf-8")
            except OSError as e:
                raise LclLabError(f"cannot write instance to {args.emit}: {e}") from e
            payload["emitted"] = args.emit
        return payload, 0
    if command == "check":
        payload = lab.check(args.cases)
        return payload, 0 if payload["passed"] else 1
    raise UsageError("a command is required (or --replay REPORT)")


def run(argv: List[str], parser: argparse.ArgumentParser) -> Tuple[Dict[str, Any], int]:
    args = parser.parse_args(argv)
    started = time.perf_counter()
    payload, code = execute(args)
    elapsed = int((time.perf_counter() - started) * 1000)
    return build_report(args.command, payload, argv, elapsed), code


def _replay(path: str, parser: argparse.ArgumentParser, output: Optional[str]) -> int:
    _require_files(path)
    started = time.perf_counter()
    differences = replay(path, lambda argv: run(argv, parser)[0])
    elapsed = int((time.perf_counter() - started) * 1000)
    payload = {"report": path, "matches": not differences, "differences": differences}
    write_report(build_report("replay", payload, ["--replay", path], elapsed), output)
    return 0 if not differences else 1


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = create_argument_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logger(level=logging.DEBUG if _opt(args, "verbose", False) else logging.WARNING)

    try:
        if args.replay:
            return _replay(args.replay, parser, _opt(args, "out"))
        if args.command is None:
            parser.print_usage(sys.stderr)
            raise UsageError("a command is required (or --replay REPORT)")
        report, code = run(argv, parser)
        output = _opt(args, "out")
        write_report(report, output)
        if output:
            print(f"{Colors.GREEN}Report saved to: {output}{Colors.RESET}", file=sys.stderr)
        return code

    except UsageError as e:
        print(f"{Colors.RED}Error: {e}{Colors.RESET}", file=sys.stderr)
        return 2
    except SystemExit as e:
        return int(e.code or 0)
    except LclLabError as e:
        print(f"{Colors.RED}Error: {e}{Colors.RESET}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"{Colors.RED}I/O error: {e}{Colors.RESET}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print(f"\n{Colors.YELLOW}Operation cancelled by user{Colors.RESET}", file=sys.stderr)
        return 130
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        print(f"{Colors.RED}Unexpected error: {e}{Colors.RESET}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
