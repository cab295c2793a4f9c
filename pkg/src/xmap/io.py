"""Bit-stable text formats: edge lists, wide crosswalk tables, series, panels.

These formats are the toolkit's interchange contract. Category labels are
never numerically interpreted ("004" stays "004"), files are UTF-8 with
comma-separated fields and no quoting (the label charset bans the characters
that would need it), output uses "\\n" line endings and input accepts "\\r\\n".
All parse errors carry 1-based line numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .core import Crossmap, CrossmapSummary, Link, build_crossmap, clean_label
from .errors import (
    CrossmapError,
    DuplicateKey,
    DuplicateLink,
    DuplicateSourceCode,
    EmptyCell,
    MissingColumn,
    NonFiniteValue,
    ParseError,
    WeightSumViolation,
)
from .transform import HarmonisedPanel, IndexedSeries

EDGE_LIST_HEADER = "from,to,weight"
SERIES_HEADER = "key,value"
PANEL_HEADER = "unit,key,value"


def format_weight(weight: float) -> str:
    """Render a link weight with up to 9 fractional digits.

    Trailing zeros are trimmed and unit weights come out as "1". Weights below
    5e-10 are not representable at this precision; the 1e-9 round-trip
    guarantee covers everything else.
    """
    text = f"{weight:.9f}".rstrip("0").rstrip(".")
    return text or "0"


def format_value(value: float) -> str:
    """Render a series value exactly: integers without a decimal point, other
    values via the shortest digits that round-trip through float()."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _lines(text: str) -> list[str]:
    """Split a document into lines, tolerating \\r\\n and one trailing newline."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.rstrip("\r") for line in lines]


# ── edge lists ────────────────────────────────────────────────────────────


def read_edge_list(text: str, source_taxonomy: str, target_taxonomy: str) -> Crossmap:
    """Parse an edge-list document into a validated crossmap.

    The header must be exactly "from,to,weight" and every row must carry an
    explicit weight (crosswalk tables without weights go through
    :func:`import_crosswalk` instead). Validation failures from crossmap
    construction pass through with the offending line attached.
    """
    lines = _lines(text)
    if not lines or lines[0] != EDGE_LIST_HEADER:
        found = lines[0] if lines else ""
        raise ParseError(1, f"expected header {EDGE_LIST_HEADER!r}, found {found!r}")

    links: list[Link] = []
    seen: dict[tuple[str, str], int] = {}
    last_line_for_source: dict[str, int] = {}
    for number, line in enumerate(lines[1:], start=2):
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 3:
            raise ParseError(number, f"expected 3 fields (from,to,weight), found {len(fields)}")
        raw_from, raw_to, raw_weight = fields
        try:
            weight = float(raw_weight)
        except ValueError:
            raise ParseError(number, f"invalid weight {raw_weight!r}") from None
        if not math.isfinite(weight):
            raise ParseError(number, f"invalid weight {raw_weight!r}")
        try:
            link = Link(raw_from, raw_to, weight)
        except CrossmapError as err:
            raise err.at_line(number)
        if link.pair in seen:
            raise DuplicateLink(link.source, link.target).at_line(number)
        seen[link.pair] = number
        last_line_for_source[link.source] = number
        links.append(link)

    try:
        return build_crossmap(source_taxonomy, target_taxonomy, links)
    except WeightSumViolation as err:
        raise err.at_line(last_line_for_source[err.source])


def write_edge_list(crossmap: Crossmap) -> str:
    """Emit an edge-list document, rows in stored link order."""
    rows = [EDGE_LIST_HEADER]
    rows.extend(
        f"{link.source},{link.target},{format_weight(link.weight)}" for link in crossmap.links
    )
    return "\n".join(rows) + "\n"


# ── wide crosswalk tables ─────────────────────────────────────────────────


@dataclass(frozen=True)
class WideCrosswalkDocument:
    """A parsed wide table: one column per code set, aligned codes per row."""

    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


def read_crosswalk_table(text: str) -> WideCrosswalkDocument:
    """Parse a wide crosswalk table (header row of column names, code rows)."""
    lines = _lines(text)
    if not lines:
        raise ParseError(1, "empty document")
    columns = tuple(c.strip() for c in lines[0].split(","))
    if any(not c for c in columns):
        raise ParseError(1, "empty column name in header")
    if len(set(columns)) != len(columns):
        raise ParseError(1, "duplicate column name in header")
    rows: list[tuple[str, ...]] = []
    for number, line in enumerate(lines[1:], start=2):
        cells = tuple(c.strip() for c in line.split(","))
        if len(cells) != len(columns):
            raise ParseError(number, f"expected {len(columns)} cells, found {len(cells)}")
        rows.append(cells)
    return WideCrosswalkDocument(columns, tuple(rows))


def import_crosswalk(doc: WideCrosswalkDocument, from_col: str, to_col: str) -> Crossmap:
    """Build a unit-weight crossmap from two columns of a wide table.

    Each row becomes one link with weight 1; the column names become the
    taxonomy names. The from-column must map each source code once. Any
    descriptive columns (human-readable names and the like) are dropped.
    """
    for name in (from_col, to_col):
        if name not in doc.columns:
            raise MissingColumn(name, doc.columns)
    from_idx = doc.columns.index(from_col)
    to_idx = doc.columns.index(to_col)

    links: list[Link] = []
    seen_sources: set[str] = set()
    for number, row in enumerate(doc.rows, start=2):
        for idx, name in ((from_idx, from_col), (to_idx, to_col)):
            if not row[idx]:
                raise EmptyCell(number, name)
        try:
            link = Link(row[from_idx], row[to_idx], 1.0)
        except CrossmapError as err:
            raise err.at_line(number)
        if link.source in seen_sources:
            raise DuplicateSourceCode(link.source).at_line(number)
        seen_sources.add(link.source)
        links.append(link)
    return build_crossmap(from_col, to_col, links)


# ── value series and panels ───────────────────────────────────────────────


def read_series(text: str, taxonomy: str) -> IndexedSeries:
    """Parse a "key,value" document into a series under the given taxonomy."""
    lines = _lines(text)
    if not lines or lines[0] != SERIES_HEADER:
        found = lines[0] if lines else ""
        raise ParseError(1, f"expected header {SERIES_HEADER!r}, found {found!r}")
    entries: dict[str, float] = {}
    for number, line in enumerate(lines[1:], start=2):
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise ParseError(number, f"expected 2 fields (key,value), found {len(fields)}")
        raw_key, raw_value = fields
        try:
            key = clean_label(raw_key)
        except CrossmapError as err:
            raise err.at_line(number)
        if key in entries:
            raise DuplicateKey(key).at_line(number)
        try:
            value = float(raw_value)
        except ValueError:
            raise ParseError(number, f"invalid value {raw_value!r}") from None
        if not math.isfinite(value):
            raise NonFiniteValue(key, value).at_line(number)
        entries[key] = value
    return IndexedSeries(taxonomy, entries)


def write_series(series: IndexedSeries) -> str:
    """Emit a "key,value" document, rows sorted by key ascending."""
    rows = [SERIES_HEADER]
    rows.extend(f"{key},{format_value(series.entries[key])}" for key in sorted(series.entries))
    return "\n".join(rows) + "\n"


def write_panel(panel: HarmonisedPanel) -> str:
    """Emit a long-format panel document in stored row order."""
    rows = [PANEL_HEADER]
    rows.extend(f"{r.unit},{r.key},{format_value(r.value)}" for r in panel.rows)
    return "\n".join(rows) + "\n"


# ── summary reports ───────────────────────────────────────────────────────


def write_summary_json(summary: CrossmapSummary) -> str:
    """Serialise a summary as one compact JSON object with fixed key order."""
    payload = {
        "n_sources": summary.n_sources,
        "n_targets": summary.n_targets,
        "n_links": summary.n_links,
        "n_splits": summary.n_splits,
        "n_aggregates": summary.n_aggregates,
        "max_in_degree": summary.max_in_degree,
        "is_crosswalk": summary.is_crosswalk,
        "most_synthetic_targets": [[label, deg] for label, deg in summary.most_synthetic_targets],
    }
    return json.dumps(payload, separators=(",", ":"))
