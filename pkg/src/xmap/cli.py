"""Command-line interface.

One command per invocation, no config files, no environment variables: the
argv plus the named input files fully determine the output bytes, which go
to stdout or, byte-identically, to the --out file. Diagnostics go to stderr.

Exit codes: 0 success, 1 domain or validation error, 2 unreadable or
malformed input, 3 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import PurePath
from typing import NoReturn, TextIO

from .core import Crossmap, build_crossmap, summarize
from .errors import CrossmapError, DocumentError
from .io import (
    import_crosswalk,
    read_crosswalk_table,
    read_edge_list,
    read_series,
    write_edge_list,
    write_series,
    write_summary_json,
)
from .transform import apply, compose
from .viz import NodeOrdering, RenderStyle, layout_bipartite, render_dot, render_svg

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_DOCUMENT = 2
EXIT_USAGE = 3


class UsageError(Exception):
    def __init__(self, message: str, usage: str) -> None:
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    # Raise instead of argparse's print-and-exit so run() owns the exit code.
    def error(self, message: str) -> NoReturn:
        raise UsageError(message, self.format_usage())


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return handle.read()


def _load_map(path: str, source_name: str | None, target_name: str | None) -> Crossmap:
    stem = PurePath(path).stem
    return read_edge_list(_read_text(path), source_name or stem, target_name or stem)


def _cmd_validate(args: argparse.Namespace) -> str:
    crossmap = _load_map(args.edges, args.source_name, args.target_name)
    s = summarize(crossmap)
    return (
        f"valid: {s.n_sources} sources, {s.n_targets} targets, {s.n_links} links, "
        f"{s.n_splits} splits, {s.n_aggregates} aggregates\n"
    )


def _cmd_transform(args: argparse.Namespace) -> str:
    crossmap = _load_map(args.map, args.source_name, args.target_name)
    # The data file is read in the map's source taxonomy so stems never clash.
    series = read_series(_read_text(args.data), crossmap.source_taxonomy)
    return write_series(apply(crossmap, series, allow_unmatched=args.allow_unmatched))


def _cmd_compose(args: argparse.Namespace) -> str:
    first = _load_map(args.first, args.source_name, None)
    # The second map is read into the first's target taxonomy: composition
    # needs matching names, and the file stem is only a provenance default.
    second = _load_map(args.second, None, args.target_name)
    if second.source_taxonomy != first.target_taxonomy:
        second = build_crossmap(first.target_taxonomy, second.target_taxonomy, second.links)
    return write_edge_list(compose(first, second))


def _cmd_render(args: argparse.Namespace) -> str:
    crossmap = _load_map(args.edges, args.source_name, args.target_name)
    if args.format == "dot":
        return render_dot(crossmap)
    plan = layout_bipartite(crossmap, NodeOrdering(args.order))
    return render_svg(plan, crossmap, RenderStyle(hide_unit_weights=args.hide_unit_weights))


def _cmd_summarize(args: argparse.Namespace) -> str:
    crossmap = _load_map(args.edges, args.source_name, args.target_name)
    s = summarize(crossmap)
    if args.json:
        return write_summary_json(s) + "\n"
    ranked = ", ".join(f"{label} ({degree})" for label, degree in s.most_synthetic_targets)
    return (
        f"taxonomies: {crossmap.source_taxonomy} -> {crossmap.target_taxonomy}\n"
        f"sources: {s.n_sources}\n"
        f"targets: {s.n_targets}\n"
        f"links: {s.n_links}\n"
        f"splits: {s.n_splits}\n"
        f"aggregates: {s.n_aggregates}\n"
        f"max in-degree: {s.max_in_degree}\n"
        f"crosswalk: {'yes' if s.is_crosswalk else 'no'}\n"
        f"most synthetic targets: {ranked}\n"
    )


def _cmd_import(args: argparse.Namespace) -> str:
    doc = read_crosswalk_table(_read_text(args.table))
    return write_edge_list(import_crosswalk(doc, args.from_col, args.to_col))


def _add_name_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--source-name", help="source taxonomy name (default: input file stem)")
    parser.add_argument("--target-name", help="target taxonomy name (default: input file stem)")


def _add_out_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write the result to this file instead of stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="xmap", description="Validate, transform, and draw crossmaps.")
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = commands.add_parser("validate", help="check an edge list and print a one-line summary")
    p.add_argument("edges", help="edge list CSV (from,to,weight)")
    _add_name_flags(p)
    _add_out_flag(p)
    p.set_defaults(handler=_cmd_validate)

    p = commands.add_parser("transform", help="recast a data series through a crossmap")
    p.add_argument("--map", required=True, help="edge list CSV for the crossmap")
    p.add_argument("--data", required=True, help="series CSV (key,value)")
    p.add_argument(
        "--allow-unmatched",
        action="store_true",
        help="warn about and drop series keys with no outgoing links",
    )
    _add_name_flags(p)
    _add_out_flag(p)
    p.set_defaults(handler=_cmd_transform)

    p = commands.add_parser("compose", help="fuse two crossmaps into one edge list")
    p.add_argument("first", help="edge list applied first")
    p.add_argument("second", help="edge list applied second")
    _add_name_flags(p)
    _add_out_flag(p)
    p.set_defaults(handler=_cmd_compose)

    p = commands.add_parser("render", help="draw a crossmap as SVG or DOT")
    p.add_argument("edges", help="edge list CSV")
    p.add_argument("--format", choices=["svg", "dot"], default="svg")
    p.add_argument(
        "--order",
        choices=[ordering.value for ordering in NodeOrdering],
        default=NodeOrdering.SPLITS_FIRST.value,
        help="row ordering for the SVG layout",
    )
    p.add_argument("--hide-unit-weights", action="store_true")
    _add_name_flags(p)
    _add_out_flag(p)
    p.set_defaults(handler=_cmd_render)

    p = commands.add_parser("summarize", help="report structural counts")
    p.add_argument("edges", help="edge list CSV")
    p.add_argument("--json", action="store_true", help="emit compact JSON instead of text")
    _add_name_flags(p)
    _add_out_flag(p)
    p.set_defaults(handler=_cmd_summarize)

    p = commands.add_parser("import-crosswalk", help="turn two columns of a wide table into an edge list")
    p.add_argument("table", help="wide crosswalk CSV with a header of column names")
    p.add_argument("--from", dest="from_col", required=True, metavar="COL", help="source column")
    p.add_argument("--to", dest="to_col", required=True, metavar="COL", help="target column")
    _add_out_flag(p)
    p.set_defaults(handler=_cmd_import)

    return parser


def run(argv: list[str], *, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out_stream = stdout if stdout is not None else sys.stdout
    err_stream = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(f"error: {err}", file=err_stream)
        print(err.usage.rstrip("\n"), file=err_stream)
        return EXIT_USAGE
    except SystemExit as stop:  # argparse exits itself only for --help
        return EXIT_OK if (stop.code or 0) == 0 else EXIT_USAGE

    log_handler = logging.StreamHandler(err_stream)
    log_handler.setFormatter(logging.Formatter("warning: %(message)s"))
    package_log = logging.getLogger(__package__)
    package_log.addHandler(log_handler)
    try:
        text = args.handler(args)
    except (DocumentError, OSError) as err:
        print(f"error: {err}", file=err_stream)
        return EXIT_DOCUMENT
    except CrossmapError as err:
        print(f"error: {err}", file=err_stream)
        return EXIT_DOMAIN
    finally:
        package_log.removeHandler(log_handler)

    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        except OSError as err:
            print(f"error: {err}", file=err_stream)
            return EXIT_DOCUMENT
    else:
        out_stream.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))
