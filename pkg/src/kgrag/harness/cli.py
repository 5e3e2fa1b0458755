#!/usr/bin/env python3

__all__ = (
    "main", "build_parser", "exit_code",
)

"""
The kgrag command line: ingest, ask, eval, compare and export-dot.
"""

import argparse
import logging
import os
import shlex
import sys
import time
from typing import List, Sequence, Union

from .report import emit_report, load_report, render_comparison, run_eval
from .. import __version__
from ..abc import (
    ConfigError, IoError, KgragError, PipelineError, QuestionError, RemoteError, TripleExtractor,
)
from ..dataset import load_calendar, load_conversations
from ..environment import Environment
from ..fixtures import CALENDAR, CONVERSATIONS, QA_PAIRS, fixture_path
from ..index import read_index, write_index
from ..kg import ProcessExtractor, build_graph, export_dot, write_triples
from ..pipeline import Mode, Pipeline, PipelineConfig

logger = logging.getLogger("kgrag.harness.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _modes(value: str) -> List[Mode]:
    if value == "both":
        return [Mode.BASELINE, Mode.KG]
    return [Mode(value)]


def _fixed_clock() -> float:
    return 0.0


def build_parser() -> argparse.ArgumentParser:
    """
    :return: The argument parser for every subcommand.
    """

    verbosity = argparse.ArgumentParser(add_help=False)
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log debug output")

    common = argparse.ArgumentParser(add_help=False, parents=[verbosity])
    common.add_argument("--calendar", default=fixture_path(CALENDAR), help="calendar export (JSON)")
    common.add_argument("--conversations", default=fixture_path(CONVERSATIONS), help="conversations (JSONL)")
    common.add_argument("--config", help="pipeline config file (TOML or JSON), flags override it")
    common.add_argument("--k", type=int, help="chunks to retrieve per query")
    common.add_argument("--embedder", choices=("hash", "remote"))
    common.add_argument("--llm", choices=("mock", "remote"))
    common.add_argument("--max-chars", type=int, dest="max_chars", help="chunk window size")
    common.add_argument("--overlap", type=int, dest="overlap_chars", help="chunk window overlap")
    common.add_argument("--dimension", type=int, help="hash embedding dimension")
    common.add_argument(
        "--extractor", metavar="CMD",
        help="external triple extractor command, run once per message with the text on stdin and "
             "'source<TAB>relation<TAB>target' lines expected on stdout (default: the built-in lexicon extractor)",
    )

    parser = _ArgumentParser(prog="kgrag", description="Personalized QA over a knowledge graph, compared with plain RAG.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    ingest = commands.add_parser("ingest", parents=[common], help="validate the data and write the indices")
    ingest.add_argument("--mode", choices=("baseline", "kg", "both"), default="both")
    ingest.add_argument("--out", default="kgrag-index", help="directory to write <mode>/ indices to")

    ask = commands.add_parser("ask", parents=[common], help="answer a single query")
    ask.add_argument("--query", "-q", required=True)
    ask.add_argument("--mode", choices=("baseline", "kg", "both"), default="kg")
    ask.add_argument("--index", help="reuse indices written by ingest instead of building them")

    eval_ = commands.add_parser(
        "eval", parents=[common], help="answer and score every QA pair",
        description="Answers and scores every QA pair. Latencies are wall-clock times, so two runs only write "
                    "byte-identical reports with --deterministic.",
    )
    eval_.add_argument("--qa", default=fixture_path(QA_PAIRS), help="QA pairs (JSON)")
    eval_.add_argument("--mode", choices=("baseline", "kg", "both"), default="both")
    eval_.add_argument("--out", default="kgrag-report", help="directory to write report.json and report.md to")
    eval_.add_argument("--in-flight", type=int, dest="in_flight", help="questions answered concurrently")
    eval_.add_argument(
        "--deterministic", action="store_true",
        help="record zero latencies so that reruns write byte-identical reports (without it, latencies differ per run)",
    )

    compare = commands.add_parser(
        "compare", parents=[verbosity], help="compare the report.json files of several eval runs, e.g. model sizes",
    )
    compare.add_argument("reports", nargs="+", metavar="REPORT", help="report.json files written by eval")
    compare.add_argument("--out", default="-", help="markdown file to write, - for stdout")

    dot = commands.add_parser("export-dot", parents=[common], help="write the knowledge graph as graphviz DOT")
    dot.add_argument("--out", default="-", help="DOT file to write, - for stdout")
    dot.add_argument("--tsv", help="also write the triples as TSV")

    return parser


def _config(args: argparse.Namespace) -> Union[PipelineConfig, None]:
    if not "config" in args:
        return None
    config = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    return config.replace(
        k=args.k,
        embedder=args.embedder,
        llm=args.llm,
        max_chars=args.max_chars,
        overlap_chars=args.overlap_chars,
        dimension=args.dimension,
        in_flight=getattr(args, "in_flight", None),
    )


def _extractor(args: argparse.Namespace) -> Union[TripleExtractor, None]:
    if not args.extractor:
        return None
    command = shlex.split(args.extractor)
    if not command:
        raise ConfigError("--extractor must name a command.")
    return ProcessExtractor(command)


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as stream:
            stream.write(text)
    except OSError as error:
        raise IoError(path, error)


# ------------------------------ Commands ------------------------------ #

def _ingest(args: argparse.Namespace, config: PipelineConfig) -> None:
    calendar = load_calendar(args.calendar)
    messages = load_conversations(args.conversations)
    extractor = _extractor(args)
    provider = Environment.create_embedder(config.embedder, config.dimension)
    client = Environment.create_llm(config.llm, config.template)

    print("Loaded %i event(s) and %i message(s)." % (len(calendar.events), len(messages)))
    try:
        for mode in _modes(args.mode):
            pipeline = Pipeline.build(config.replace(mode=mode), calendar, messages, provider, client, extractor)
            directory = os.path.join(args.out, mode.value)
            write_index(pipeline.index, directory)
            print("Wrote %s index of %i chunk(s) to %s." % (mode.value, len(pipeline.index), directory))
    finally:
        provider.close()
        client.close()


def _ask(args: argparse.Namespace, config: PipelineConfig) -> None:
    extractor = _extractor(args)
    provider = Environment.create_embedder(config.embedder, config.dimension)
    client = Environment.create_llm(config.llm, config.template)

    calendar = messages = None
    try:
        for mode in _modes(args.mode):
            mode_config = config.replace(mode=mode)
            if args.index is not None:
                index = read_index(os.path.join(args.index, mode.value), provider)
                pipeline = Pipeline(mode_config, index, provider, client)
            else:
                if calendar is None:
                    calendar = load_calendar(args.calendar)
                    messages = load_conversations(args.conversations)
                pipeline = Pipeline.build(mode_config, calendar, messages, provider, client, extractor)

            answer = pipeline.answer(args.query)
            print("[%s] %s" % (mode.value, answer.text))
            for chunk_id, score in answer.retrieved:
                print("  %.3f  %s  %s" % (score, chunk_id, pipeline.index.chunks[chunk_id].text.replace("\n", " | ")))
            print("  (%.1fms)" % (answer.latency_seconds * 1000))
    finally:
        provider.close()
        client.close()


def _eval(args: argparse.Namespace, config: PipelineConfig) -> None:
    report = run_eval(
        config, args.calendar, args.conversations, args.qa, _modes(args.mode),
        extractor=_extractor(args),
        clock=_fixed_clock if args.deterministic else time.perf_counter,
    )
    json_path, markdown_path = emit_report(report, args.out)

    for mode, result in report.results.items():
        print("%-12s ROUGE-1 F1 %.3f  ROUGE-2 F1 %.3f  ROUGE-L F1 %.3f  BLEU-1 %.3f  latency %.3fs" % (
            mode.title,
            result.mean.rouge1.f1, result.mean.rouge2.f1, result.mean.rougeL.f1, result.mean.bleu1,
            result.mean.latency_seconds,
        ))
    print("Wrote %s and %s." % (json_path, markdown_path))


def _compare(args: argparse.Namespace, config: None) -> None:
    reports = [load_report(path) for path in args.reports]
    _write(render_comparison(reports), args.out)
    if args.out != "-":
        print("Compared %i report(s) in %s." % (len(reports), args.out))


def _export_dot(args: argparse.Namespace, config: PipelineConfig) -> None:
    graph = build_graph(load_calendar(args.calendar), load_conversations(args.conversations), _extractor(args))
    _write(export_dot(graph), args.out)
    if args.out != "-":
        print("Wrote %i triple(s) to %s." % (len(graph), args.out))
    if args.tsv:
        write_triples(graph, args.tsv)


_COMMANDS = {
    "ingest": _ingest,
    "ask": _ask,
    "eval": _eval,
    "compare": _compare,
    "export-dot": _export_dot,
}


def exit_code(error: KgragError) -> int:
    """
    :return: The process exit code for an error, looking through stage and question context.
    """

    while isinstance(error, (PipelineError, QuestionError)):
        if not isinstance(error.cause, KgragError):
            return EXIT_DATA
        error = error.cause
    if isinstance(error, RemoteError):
        return EXIT_BACKEND
    if isinstance(error, ConfigError):
        return EXIT_USAGE
    return EXIT_DATA


def main(argv: Union[Sequence[str], None] = None) -> int:
    """
    Runs the command line.

    :param argv: The arguments, if None, sys.argv[1:].
    :return: The exit code: 0 on success, 1 for usage errors, 2 for data errors and 3 for backend errors.
    """

    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        _COMMANDS[args.command](args, _config(args))
    except KgragError as error:
        logger.debug("Command %r failed.", args.command, exc_info=True)
        print("kgrag: %s" % error, file=sys.stderr)
        return exit_code(error)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
