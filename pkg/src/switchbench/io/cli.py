"""
Command-line interface.

Exit codes of ``analyze``: 0 structurally controllable, 1 not, 2 input error,
3 when the oracle cross-check disagrees with the graph verdict. Other
subcommands return 0 on success and 2 on input error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from switchbench.contracts.enums import GraphKind
from switchbench.core.analyzer import Analyzer
from switchbench.core.errors import SwitchbenchError
from switchbench.core.graphs import export_dot
from switchbench.core.structured import SwitchedSystem
from switchbench.io.documents import gen_random, load_spec, render_spec
from switchbench.io.report import render_report_json, render_report_text
from switchbench.utils.logger import configure_logger

import logging

LOGGER = logging.getLogger(__name__)

EXIT_CONTROLLABLE = 0
EXIT_NOT_CONTROLLABLE = 1
EXIT_INPUT_ERROR = 2
EXIT_DISAGREEMENT = 3

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _read_system(source: str) -> SwitchedSystem:
    text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    return load_spec(text)


def _write(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")
        LOGGER.info(f"Wrote {output}")


def _graph_choice(value: str) -> tuple[GraphKind, int | None]:
    if value in (GraphKind.UNION.value, GraphKind.COLORED.value):
        return GraphKind(value), None
    kind, _, index = value.partition(":")
    if kind == GraphKind.SUBSYSTEM.value and index.isdigit():
        return GraphKind.SUBSYSTEM, int(index)
    raise argparse.ArgumentTypeError(f"expected union, colored or subsystem:<i>, got {value!r}")


def _subscribe(analyzer: Analyzer) -> None:
    def on_stage_finished(sender, stage: str, elapsed: float):
        LOGGER.info(f"Stage {stage} finished in {elapsed:.6f}s")

    def on_trial_finished(sender, index: int, seed: int, dimension: int):
        LOGGER.debug(f"Oracle trial {index} (seed {seed}): dimension {dimension}")

    analyzer.stage_finished.connect(on_stage_finished, weak=False)
    analyzer.trial_finished.connect(on_trial_finished, weak=False)


def cmd_analyze(args: argparse.Namespace) -> int:
    system = _read_system(args.file)
    analyzer = Analyzer(oracle_trials=args.oracle, seed=args.seed, workers=args.workers)
    _subscribe(analyzer)
    report = analyzer.analyze(system, source=args.file)
    _write(render_report_json(report) if args.json else render_report_text(report), None)
    if args.profile:
        analyzer.dump_timers()
    if not report.consistent:
        return EXIT_DISAGREEMENT
    return EXIT_CONTROLLABLE if report.verdict.controllable else EXIT_NOT_CONTROLLABLE


def cmd_export_dot(args: argparse.Namespace) -> int:
    system = _read_system(args.file)
    kind, subsystem = args.graph
    graph = Analyzer().graph(system, kind, subsystem)
    _write(export_dot(graph), args.output)
    return 0


def cmd_gen_random(args: argparse.Namespace) -> int:
    system = gen_random(args.n, args.r, args.m, args.density, args.seed)
    _write(render_spec(system), args.output)
    return 0


def cmd_gyrank(args: argparse.Namespace) -> int:
    system = _read_system(args.file)
    sum_rank, stacked_rank = Analyzer().g_ranks(system)
    _write(f"n: {system.n}\nsum: {sum_rank}\nstacked: {stacked_rank}\n", None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchbench",
        description="Structural controllability of switched linear systems.",
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, default="WARNING")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--profile", action="store_true", help="log stage timer statistics")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="decide structural controllability")
    analyze.add_argument("file", help="system document, or - for stdin")
    analyze.add_argument("--json", action="store_true", help="machine-readable report")
    analyze.add_argument("--oracle", type=int, default=0, metavar="TRIALS",
                         help="cross-check with random F_p realizations")
    analyze.add_argument("--seed", type=int, default=0)
    analyze.add_argument("--workers", type=int, default=1)
    analyze.set_defaults(handler=cmd_analyze)

    dot = commands.add_parser("export-dot", help="write a graph in DOT format")
    dot.add_argument("file")
    dot.add_argument("--graph", type=_graph_choice, default=(GraphKind.COLORED, None),
                     help="union, colored or subsystem:<i>")
    dot.add_argument("-o", "--output")
    dot.set_defaults(handler=cmd_export_dot)

    rand = commands.add_parser("gen-random", help="write a random system document")
    rand.add_argument("--n", type=int, required=True)
    rand.add_argument("--r", type=int, required=True)
    rand.add_argument("--m", type=int, required=True)
    rand.add_argument("--density", type=float, required=True)
    rand.add_argument("--seed", type=int, default=0)
    rand.add_argument("-o", "--output")
    rand.set_defaults(handler=cmd_gen_random)

    grank = commands.add_parser("gyrank", aliases=["grank"],
                                help="g-rank of the sum and stacked patterns")
    grank.add_argument("file")
    grank.set_defaults(handler=cmd_gyrank)
    return parser


def _level(args: argparse.Namespace) -> str:
    if args.verbose >= 2:
        return "DEBUG"
    if args.verbose == 1:
        return "INFO"
    return args.log_level


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logger(_level(args))
    try:
        return args.handler(args)
    except (SwitchbenchError, OSError, ValueError) as e:
        LOGGER.debug("Input error", exc_info=True)
        print(f"switchbench: error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
