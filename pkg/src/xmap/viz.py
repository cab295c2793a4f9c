"""Deterministic node-link diagrams for crossmaps.

Visual grammar: source labels are italic when the category's value will be
redistributed (a split) and bold when it passes through unmodified; split
edges are dashed, one-to-one edges solid; target nodes darken with the number
of incoming contributions, so the most synthetic values stand out; weight
text sits at edge midpoints, with unit weights optionally suppressed.

Layouts order the source column to put splits on top (directing attention to
the redistribution weights) or the target column by incoming degree
(highlighting composition), and multi-layer chains run iterative barycenter
sweeps to reduce edge crossings. Identical inputs always produce
byte-identical SVG and DOT text.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from xml.sax.saxutils import escape

from .core import Crossmap
from .errors import PlanMismatch
from .io import format_weight
from .transform import MultiStepChain

SOLID = "solid"
DASHED = "dashed"

_MAX_LABEL_CHARS = 24
_PAD_X = 160.0
_PAD_Y = 40.0
_NODE_RADIUS = 6.0
_EDGE_TRIM = 9.0

_SOURCE_FILL = "#33415c"
_TARGET_FILL = "#1f6f8b"
_EDGE_STROKE = "#52606d"
_LABEL_FILL = "#3e4c59"


class NodeOrdering(Enum):
    """Row-ordering policies for the two-layer layout."""

    SPLITS_FIRST = "splits-first"
    TARGET_INDEGREE = "target-indegree"
    INPUT_ORDER = "input-order"


@dataclass(frozen=True)
class PlacedNode:
    label: str
    x: int  # column index
    y: int  # row index within the column
    style_class: str  # "split" | "one-to-one" | "aggregate" | "unique"


@dataclass(frozen=True)
class PlannedEdge:
    tail: tuple[int, int]  # (column, row) of the source node
    head: tuple[int, int]
    weight: float
    line_style: str  # SOLID or DASHED; dashed iff the tail node is a split
    label_text: str | None


@dataclass(frozen=True)
class LayoutPlan:
    """Resolved node positions, orderings, and style classes for rendering."""

    layers: tuple[tuple[PlacedNode, ...], ...]
    edges: tuple[PlannedEdge, ...]

    def __post_init__(self) -> None:
        for index, column in enumerate(self.layers):
            if sorted(node.y for node in column) != list(range(len(column))):
                raise PlanMismatch(f"rows of column {index} are not a permutation")
            for node in column:
                if node.x != index:
                    raise PlanMismatch(f"node {node.label!r} is misfiled in column {index}")


@dataclass(frozen=True)
class RenderStyle:
    """Rendering switches and geometry, in abstract (pixel) units."""

    hide_unit_weights: bool = False
    shade_by_in_degree: bool = True
    node_spacing: float = 44.0
    layer_spacing: float = 240.0

    def __post_init__(self) -> None:
        if self.node_spacing <= 0 or self.layer_spacing <= 0:
            raise ValueError("node_spacing and layer_spacing must be positive")


# ── layout ────────────────────────────────────────────────────────────────


def _mean(values: list[int], fallback: float) -> float:
    return sum(values) / len(values) if values else fallback


def layout_bipartite(
    crossmap: Crossmap,
    ordering: NodeOrdering = NodeOrdering.SPLITS_FIRST,
) -> LayoutPlan:
    """Place a crossmap on two columns under the requested ordering.

    splits-first: split sources on top (stable by input order among
    themselves), one-to-one sources below; targets follow the barycenter of
    their connected source rows, ties by label. target-indegree: targets by
    in-degree descending then label; sources by barycenter. input-order: both
    columns in first-appearance order.
    """
    sources = list(crossmap.source_categories)
    targets = list(crossmap.target_categories)

    if ordering is NodeOrdering.SPLITS_FIRST:
        sources = sorted(sources, key=lambda s: 0 if crossmap.out_degree(s) > 1 else 1)
        src_row = {label: row for row, label in enumerate(sources)}
        targets = sorted(
            targets,
            key=lambda t: (
                _mean([src_row[l.source] for l in crossmap.links_into(t)], 0.0),
                t,
            ),
        )
    elif ordering is NodeOrdering.TARGET_INDEGREE:
        targets = sorted(targets, key=lambda t: (-crossmap.in_degree(t), t))
        tgt_row = {label: row for row, label in enumerate(targets)}
        sources = sorted(
            sources,
            key=lambda s: (
                _mean([tgt_row[l.target] for l in crossmap.links_from(s)], 0.0),
                s,
            ),
        )
    # INPUT_ORDER keeps first-appearance order on both columns.

    src_row = {label: row for row, label in enumerate(sources)}
    tgt_row = {label: row for row, label in enumerate(targets)}
    layers = (
        tuple(
            PlacedNode(
                label, 0, src_row[label],
                "split" if crossmap.out_degree(label) > 1 else "one-to-one",
            )
            for label in sources
        ),
        tuple(
            PlacedNode(
                label, 1, tgt_row[label],
                "aggregate" if crossmap.in_degree(label) > 1 else "unique",
            )
            for label in targets
        ),
    )
    edges = tuple(
        PlannedEdge(
            tail=(0, src_row[link.source]),
            head=(1, tgt_row[link.target]),
            weight=link.weight,
            line_style=DASHED if crossmap.out_degree(link.source) > 1 else SOLID,
            label_text=format_weight(link.weight),
        )
        for link in sorted(crossmap.links, key=lambda link: link.pair)
    )
    return LayoutPlan(layers, edges)


def count_crossings(orders: list[list[str]], steps: tuple[Crossmap, ...]) -> int:
    """Pairwise edge-crossing count across all adjacent column pairs."""
    total = 0
    for gap, step in enumerate(steps):
        tail_row = {label: row for row, label in enumerate(orders[gap])}
        head_row = {label: row for row, label in enumerate(orders[gap + 1])}
        spans = [(tail_row[l.source], head_row[l.target]) for l in step.links]
        for i in range(len(spans)):
            for j in range(i + 1, len(spans)):
                (a_tail, a_head), (b_tail, b_head) = spans[i], spans[j]
                if (a_tail - b_tail) * (a_head - b_head) < 0:
                    total += 1
    return total


def layout_chain(chain: MultiStepChain, sweeps: int = 4) -> LayoutPlan:
    """Place a multi-step chain on one column per taxonomy layer.

    Runs left-to-right then right-to-left barycenter sweeps per iteration,
    keeping the best ordering seen (the initial first-appearance ordering
    included), so the final crossing count never exceeds the input order's.
    """
    if sweeps < 1:
        raise ValueError("sweeps must be at least 1")
    steps = chain.steps

    columns: list[list[str]] = [list(steps[0].source_categories)]
    for index, step in enumerate(steps):
        column = list(step.target_categories)
        present = set(column)
        if index + 1 < len(steps):
            # Sources of the next step that nothing maps into still occupy a row.
            for label in steps[index + 1].source_categories:
                if label not in present:
                    column.append(label)
                    present.add(label)
        columns.append(column)

    into: list[dict[str, list[str]]] = []
    out_of: list[dict[str, list[str]]] = []
    for step in steps:
        ins: dict[str, list[str]] = {}
        outs: dict[str, list[str]] = {}
        for link in step.links:
            outs.setdefault(link.source, []).append(link.target)
            ins.setdefault(link.target, []).append(link.source)
        into.append(ins)
        out_of.append(outs)

    orders = [list(column) for column in columns]
    best_orders = [list(column) for column in columns]
    best_crossings = count_crossings(orders, steps)

    for _ in range(sweeps):
        for j in range(1, len(orders)):
            prev_row = {label: row for row, label in enumerate(orders[j - 1])}
            here_row = {label: row for row, label in enumerate(orders[j])}
            orders[j].sort(
                key=lambda label: _mean(
                    [prev_row[s] for s in into[j - 1].get(label, [])],
                    float(here_row[label]),
                )
            )
        for j in range(len(orders) - 2, -1, -1):
            next_row = {label: row for row, label in enumerate(orders[j + 1])}
            here_row = {label: row for row, label in enumerate(orders[j])}
            step_out = out_of[j] if j < len(out_of) else {}
            orders[j].sort(
                key=lambda label: _mean(
                    [next_row[t] for t in step_out.get(label, [])],
                    float(here_row[label]),
                )
            )
        crossings = count_crossings(orders, steps)
        if crossings < best_crossings:
            best_crossings = crossings
            best_orders = [list(order) for order in orders]

    orders = best_orders
    layers: list[tuple[PlacedNode, ...]] = []
    rows: list[dict[str, int]] = []
    for col_index, order in enumerate(orders):
        row_of = {label: row for row, label in enumerate(order)}
        rows.append(row_of)
        placed = []
        for label in order:
            if col_index == 0:
                out_degree = len(out_of[0].get(label, []))
                style = "split" if out_degree > 1 else "one-to-one"
            else:
                in_degree = len(into[col_index - 1].get(label, []))
                style = "aggregate" if in_degree > 1 else "unique"
            placed.append(PlacedNode(label, col_index, row_of[label], style))
        layers.append(tuple(placed))

    edges: list[PlannedEdge] = []
    for gap, step in enumerate(steps):
        for link in sorted(step.links, key=lambda link: link.pair):
            edges.append(
                PlannedEdge(
                    tail=(gap, rows[gap][link.source]),
                    head=(gap + 1, rows[gap + 1][link.target]),
                    weight=link.weight,
                    line_style=DASHED if step.out_degree(link.source) > 1 else SOLID,
                    label_text=format_weight(link.weight),
                )
            )
    return LayoutPlan(tuple(layers), tuple(edges))


# ── rendering ─────────────────────────────────────────────────────────────


def _coord(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return text or "0"


def target_opacity(in_degree: int) -> float:
    """Linear opacity ramp with a visible floor, clamped at fully opaque."""
    return min(1.0, 0.35 + 0.25 * (in_degree - 1))


def _label_markup(label: str, x: float, y: float, attrs: str) -> str:
    shown = label
    title = ""
    if len(label) > _MAX_LABEL_CHARS:
        shown = label[: _MAX_LABEL_CHARS - 1] + "…"
        title = f"<title>{escape(label)}</title>"
    return f'<text x="{_coord(x)}" y="{_coord(y)}"{attrs}>{title}{escape(shown)}</text>'


def render_svg(plan: LayoutPlan, crossmap: Crossmap, style: RenderStyle | None = None) -> str:
    """Render a two-layer plan of a crossmap as an SVG 1.1 document.

    Element order is fixed (source nodes by row, target nodes by row, edges
    by (source, target) pair, weight labels last) and all numbers use a fixed
    format, so rendering is byte-identical across runs. Weight labels stagger
    above/below edge midpoints on alternate edges to reduce collisions.
    """
    style = style or RenderStyle()
    if len(plan.layers) != 2:
        raise PlanMismatch(f"expected 2 layers, plan has {len(plan.layers)}")
    plan_sources = sorted(node.label for node in plan.layers[0])
    plan_targets = sorted(node.label for node in plan.layers[1])
    if plan_sources != sorted(crossmap.source_categories):
        raise PlanMismatch("source layer does not match the crossmap's source categories")
    if plan_targets != sorted(crossmap.target_categories):
        raise PlanMismatch("target layer does not match the crossmap's target categories")

    def position(column: int, row: int) -> tuple[float, float]:
        return (_PAD_X + column * style.layer_spacing, _PAD_Y + row * style.node_spacing)

    src_row = {node.label: node.y for node in plan.layers[0]}
    tgt_row = {node.label: node.y for node in plan.layers[1]}
    max_rows = max(len(plan.layers[0]), len(plan.layers[1]))
    width = 2 * _PAD_X + style.layer_spacing
    height = 2 * _PAD_Y + (max_rows - 1) * style.node_spacing

    parts: list[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_coord(width)}" height="{_coord(height)}" '
        f'viewBox="0 0 {_coord(width)} {_coord(height)}">',
        '<g font-family="Helvetica, Arial, sans-serif" font-size="13" fill="#1f2933">',
    ]

    for node in sorted(plan.layers[0], key=lambda node: node.y):
        x, y = position(0, node.y)
        split = crossmap.out_degree(node.label) > 1
        face = ' font-style="italic"' if split else ' font-weight="bold"'
        parts.append(
            f'<circle cx="{_coord(x)}" cy="{_coord(y)}" r="{_coord(_NODE_RADIUS)}" '
            f'fill="{_SOURCE_FILL}"/>'
        )
        parts.append(
            _label_markup(node.label, x - 2 * _NODE_RADIUS, y + 4, f' text-anchor="end"{face}')
        )

    for node in sorted(plan.layers[1], key=lambda node: node.y):
        x, y = position(1, node.y)
        shade = ""
        if style.shade_by_in_degree:
            shade = f' fill-opacity="{_coord(target_opacity(crossmap.in_degree(node.label)))}"'
        parts.append(
            f'<circle cx="{_coord(x)}" cy="{_coord(y)}" r="{_coord(_NODE_RADIUS)}" '
            f'fill="{_TARGET_FILL}"{shade}/>'
        )
        parts.append(
            _label_markup(node.label, x + 2 * _NODE_RADIUS, y + 4, ' text-anchor="start"')
        )

    ordered_links = sorted(crossmap.links, key=lambda link: link.pair)
    for link in ordered_links:
        x1, y1 = position(0, src_row[link.source])
        x2, y2 = position(1, tgt_row[link.target])
        dashed = ' stroke-dasharray="6,4"' if crossmap.out_degree(link.source) > 1 else ""
        parts.append(
            f'<line x1="{_coord(x1 + _EDGE_TRIM)}" y1="{_coord(y1)}" '
            f'x2="{_coord(x2 - _EDGE_TRIM)}" y2="{_coord(y2)}" '
            f'stroke="{_EDGE_STROKE}" stroke-width="1.5"{dashed}/>'
        )

    for index, link in enumerate(ordered_links):
        if style.hide_unit_weights and link.weight == 1.0:
            continue
        x1, y1 = position(0, src_row[link.source])
        x2, y2 = position(1, tgt_row[link.target])
        mid_x = (x1 + x2) / 2
        mid_y = (y1 + y2) / 2 + (-6.0 if index % 2 == 0 else 14.0)
        parts.append(
            f'<text x="{_coord(mid_x)}" y="{_coord(mid_y)}" text-anchor="middle" '
            f'font-size="11" fill="{_LABEL_FILL}">{escape(format_weight(link.weight))}</text>'
        )

    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _dot_id(prefix: str, label: str) -> str:
    return f'"{prefix}/' + label.replace("\\", "\\\\") + '"'


def _dot_label(label: str) -> str:
    return '"' + label.replace("\\", "\\\\") + '"'


def render_dot(crossmap: Crossmap) -> str:
    """Emit the crossmap in DOT form for generic graph viewers.

    Each layer becomes a same-rank group (node ids are layer-qualified so a
    self-loop like AUS -> AUS keeps one node per layer); each link becomes an
    edge statement with the weight as its label and a dashed style on edges
    leaving split sources. Ordering matches render_svg: nodes by layer, edges
    sorted by (source, target).
    """
    lines = ["digraph crossmap {", "  rankdir=LR;"]
    lines.append("  {")
    lines.append("    rank=same;")
    for label in crossmap.source_categories:
        lines.append(f"    {_dot_id('from', label)} [label={_dot_label(label)}];")
    lines.append("  }")
    lines.append("  {")
    lines.append("    rank=same;")
    for label in crossmap.target_categories:
        lines.append(f"    {_dot_id('to', label)} [label={_dot_label(label)}];")
    lines.append("  }")
    for link in sorted(crossmap.links, key=lambda link: link.pair):
        attrs = f"label={_dot_label(format_weight(link.weight))}"
        if crossmap.out_degree(link.source) > 1:
            attrs += ", style=dashed"
        lines.append(f"  {_dot_id('from', link.source)} -> {_dot_id('to', link.target)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
