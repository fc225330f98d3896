"""
Command-line front end for the RPQ engine
Parses flags into a CliConfig, runs the query workflow and prints results
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from pydantic import ValidationError

from .pipeline.query_config import CliConfig
from .pipeline.query_pipeline import EXIT_USAGE_ERROR, QueryPipeline
from .utils.settings import EngineSettings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits the process on bad flags; surface them as exit status 2 instead
    def error(self, message: str):
        raise _ArgumentError(message)


def build_parser(settings: EngineSettings) -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rpq",
        description="Evaluate a regular path query (source, regex, ?x) over an edge-labelled graph",
    )
    parser.add_argument("graph", help="graph file: one 'source<TAB>label<TAB>target' edge per line")

    sources = parser.add_mutually_exclusive_group(required=True)
    sources.add_argument("--source", help="name of the start node")
    sources.add_argument("--all-sources", action="store_true", help="run the query from every node")

    query = parser.add_mutually_exclusive_group(required=True)
    query.add_argument("--regex", help="regular expression over edge labels")
    query.add_argument("--query-file", help="file holding the regular expression")

    parser.add_argument("--mode", choices=["reach", "one", "all", "count"], default="all")
    parser.add_argument("--limit", type=int, help="maximum number of paths printed per answer")
    parser.add_argument("--format", dest="output_format", choices=["text", "jsonl"], default=settings.output_format)
    parser.add_argument("--dump-automaton", action="store_true", help="write the query automaton to stderr")
    parser.add_argument(
        "--log-level",
        default=settings.log_level,
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    return parser


def run(config: CliConfig, out: TextIO, err: TextIO) -> int:
    """Evaluate one configured query; results go to `out`, diagnostics to `err`"""
    pipeline = QueryPipeline()
    result = pipeline.process_query(config)

    if result["automaton_dump"]:
        err.write(result["automaton_dump"])

    if not result["success"]:
        err.write(f"rpq: {result['error_message']}\n")
        return result["exit_status"]

    for line in result["output_lines"]:
        out.write(line + "\n")
    out.flush()
    return 0


def main(argv: Optional[List[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    try:
        settings = EngineSettings.from_env()
    except (ValidationError, ValueError) as e:
        err.write(f"rpq: invalid environment settings: {e}\n")
        return EXIT_USAGE_ERROR

    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as e:
        err.write(f"{parser.format_usage()}rpq: error: {e}\n")
        return EXIT_USAGE_ERROR

    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT, stream=err, force=True)

    try:
        config = CliConfig(
            graph_path=args.graph,
            source=args.source,
            all_sources=args.all_sources,
            regex=args.regex,
            query_file=args.query_file,
            mode=args.mode,
            limit=args.limit,
            output_format=args.output_format,
            dump_automaton=args.dump_automaton,
            max_workers=settings.max_workers,
        )
    except ValidationError as e:
        messages = "; ".join(error["msg"] for error in e.errors())
        err.write(f"rpq: invalid arguments: {messages}\n")
        return EXIT_USAGE_ERROR

    return run(config, out, err)


if __name__ == "__main__":
    sys.exit(main())
