"""Crossmaps: validated weighted recodings between categorical taxonomies.

A crossmap is a directed weighted graph from the categories of one taxonomy
to the categories of another, with every source's outgoing weights summing
to one. Applying it to numeric data renames, reweights, and aggregates the
values in a single mass-preserving step; crossmaps compose end to end, and
one-to-one unit-weight crossmaps (crosswalks) invert exactly.
"""

from .core import (
    Crossmap,
    CrossmapSummary,
    Link,
    RelationKind,
    WEIGHT_SUM_TOLERANCE,
    build_crossmap,
    classify_source,
    classify_target,
    clean_label,
    summarize,
)
from .errors import (
    CrossmapError,
    DocumentError,
    DuplicateKey,
    DuplicateLink,
    DuplicateSourceCode,
    DuplicateUnit,
    EmptyCell,
    EmptyCrossmap,
    InvalidLabel,
    MissingColumn,
    MissingSourceMapping,
    NonFiniteValue,
    NotBijective,
    ParseError,
    PlanMismatch,
    TargetTaxonomyMismatch,
    TaxonomyMismatch,
    UncoveredIntermediate,
    UnknownCategory,
    WeightOutOfRange,
    WeightSumViolation,
)
from .io import (
    WideCrosswalkDocument,
    import_crosswalk,
    read_crosswalk_table,
    read_edge_list,
    read_series,
    write_edge_list,
    write_panel,
    write_series,
    write_summary_json,
)
from .transform import (
    HarmonisedPanel,
    IndexedSeries,
    MultiStepChain,
    PanelRow,
    apply,
    apply_chain,
    compose,
    harmonise,
    invert,
)
from .viz import (
    LayoutPlan,
    NodeOrdering,
    PlacedNode,
    PlannedEdge,
    RenderStyle,
    layout_bipartite,
    layout_chain,
    render_dot,
    render_svg,
)

__version__ = "0.1.0"

__all__ = [
    "WEIGHT_SUM_TOLERANCE",
    "Crossmap",
    "CrossmapError",
    "CrossmapSummary",
    "DocumentError",
    "DuplicateKey",
    "DuplicateLink",
    "DuplicateSourceCode",
    "DuplicateUnit",
    "EmptyCell",
    "EmptyCrossmap",
    "HarmonisedPanel",
    "IndexedSeries",
    "InvalidLabel",
    "LayoutPlan",
    "Link",
    "MissingColumn",
    "MissingSourceMapping",
    "MultiStepChain",
    "NodeOrdering",
    "NonFiniteValue",
    "NotBijective",
    "PanelRow",
    "ParseError",
    "PlacedNode",
    "PlannedEdge",
    "PlanMismatch",
    "RelationKind",
    "RenderStyle",
    "TargetTaxonomyMismatch",
    "TaxonomyMismatch",
    "UncoveredIntermediate",
    "UnknownCategory",
    "WeightOutOfRange",
    "WeightSumViolation",
    "WideCrosswalkDocument",
    "apply",
    "apply_chain",
    "build_crossmap",
    "classify_source",
    "classify_target",
    "clean_label",
    "compose",
    "harmonise",
    "import_crosswalk",
    "invert",
    "layout_bipartite",
    "layout_chain",
    "read_crosswalk_table",
    "read_edge_list",
    "read_series",
    "render_dot",
    "render_svg",
    "summarize",
    "write_edge_list",
    "write_panel",
    "write_series",
    "write_summary_json",
]
