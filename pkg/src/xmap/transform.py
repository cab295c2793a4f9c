"""Cross-taxonomy transformation engine.

Pushes category-indexed numeric data through a crossmap in three moves:
rename each category along its links, multiply the value by the link weight,
then sum the pieces per target category. Also provides sequential composition
of crossmaps, inversion of bijective crosswalks, and harmonisation of several
sources into one long-format panel sharing a target taxonomy.

Floating-point determinism: every reduction iterates links sorted by
(source, target), so repeated runs produce byte-identical results.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

from .core import Crossmap, Link, build_crossmap, clean_label
from .errors import (
    CrossmapError,
    DuplicateKey,
    DuplicateUnit,
    MissingSourceMapping,
    NonFiniteValue,
    NotBijective,
    TargetTaxonomyMismatch,
    TaxonomyMismatch,
    UncoveredIntermediate,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndexedSeries:
    """A category -> numeric value association under one taxonomy.

    Values carry whatever numeric mass the dataset measures (counts, currency,
    population). Labels are trimmed and validated; values must be finite.
    """

    taxonomy: str
    entries: Mapping[str, float]

    def __post_init__(self) -> None:
        cleaned: dict[str, float] = {}
        for key, value in self.entries.items():
            label = clean_label(key)
            if label in cleaned:
                raise DuplicateKey(label)
            value = float(value)
            if not math.isfinite(value):
                raise NonFiniteValue(label, value)
            cleaned[label] = value
        object.__setattr__(self, "entries", MappingProxyType(cleaned))

    def total(self) -> float:
        """Sum of all values, iterated in key order for determinism."""
        return sum(self.entries[k] for k in sorted(self.entries))


@dataclass(frozen=True)
class MultiStepChain:
    """An ordered sequence of crossmaps forming one multi-layer transformation.

    Consecutive steps must agree on the shared taxonomy name, and every target
    category of a step must be a source category of the next step -- otherwise
    mass flowing through the uncovered category would be lost mid-chain.
    """

    steps: tuple[Crossmap, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise CrossmapError("a multi-step chain needs at least one crossmap")
        for left, right in zip(self.steps, self.steps[1:]):
            if left.target_taxonomy != right.source_taxonomy:
                raise TaxonomyMismatch(left.target_taxonomy, right.source_taxonomy)
            uncovered = sorted(set(left.target_categories) - set(right.source_categories))
            if uncovered:
                raise UncoveredIntermediate(uncovered[0])

    @property
    def taxonomies(self) -> tuple[str, ...]:
        """All layer names, first source through final target."""
        return (self.steps[0].source_taxonomy,) + tuple(s.target_taxonomy for s in self.steps)


class PanelRow(NamedTuple):
    unit: str
    key: str
    value: float


@dataclass(frozen=True)
class HarmonisedPanel:
    """Long-format rows (unit, key, value) under one shared target taxonomy."""

    target_taxonomy: str
    rows: tuple[PanelRow, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(PanelRow(*r) for r in self.rows))
        seen: set[tuple[str, str]] = set()
        for row in self.rows:
            if (row.unit, row.key) in seen:
                raise CrossmapError(f"duplicate panel row for ({row.unit!r}, {row.key!r})")
            seen.add((row.unit, row.key))


def apply(
    crossmap: Crossmap,
    series: IndexedSeries,
    allow_unmatched: bool = False,
) -> IndexedSeries:
    """Transform a series into the crossmap's target taxonomy.

    Each target's value is the weighted sum of its contributing sources;
    sources covered by the map but absent from the data contribute zero, and
    every target category appears in the output (zeros included) so downstream
    merges see a rectangular category set.

    A data category with no outgoing link raises ``MissingSourceMapping``
    unless ``allow_unmatched`` is set, in which case its mass is excluded and
    a warning is logged -- silent mass loss is the worst failure mode here.
    """
    if series.taxonomy != crossmap.source_taxonomy:
        raise TaxonomyMismatch(crossmap.source_taxonomy, series.taxonomy)

    known = set(crossmap.source_categories)
    unmatched = sorted(k for k in series.entries if k not in known)
    if unmatched:
        if not allow_unmatched:
            raise MissingSourceMapping(unmatched[0], extra=len(unmatched) - 1)
        excluded = sum(abs(series.entries[k]) for k in unmatched)
        log.warning(
            "excluded %d unmatched categories (absolute mass %.6g): %s",
            len(unmatched),
            excluded,
            ", ".join(unmatched[:5]) + ("..." if len(unmatched) > 5 else ""),
        )

    totals = {target: 0.0 for target in crossmap.target_categories}
    for link in sorted(crossmap.links, key=lambda link: link.pair):
        totals[link.target] += link.weight * series.entries.get(link.source, 0.0)
    return IndexedSeries(crossmap.target_taxonomy, totals)


def compose(a: Crossmap, b: Crossmap) -> Crossmap:
    """Collapse two sequential crossmaps into one.

    The composed weight from s to u is the sum over intermediates m of
    weight(s -> m) * weight(m -> u). Every target of ``a`` must be a source of
    ``b``; composition never renormalises, because renormalisation would
    invent weights the analyst never specified. Under that coverage condition
    the product of row-stochastic maps is row-stochastic, so the result passes
    full validation. Composed links are ordered by (source, target).
    """
    if a.target_taxonomy != b.source_taxonomy:
        raise TaxonomyMismatch(a.target_taxonomy, b.source_taxonomy)
    uncovered = sorted(set(a.target_categories) - set(b.source_categories))
    if uncovered:
        raise UncoveredIntermediate(uncovered[0])

    weights: dict[tuple[str, str], float] = {}
    for first in sorted(a.links, key=lambda link: link.pair):
        for second in sorted(b.links_from(first.target), key=lambda link: link.pair):
            pair = (first.source, second.target)
            weights[pair] = weights.get(pair, 0.0) + first.weight * second.weight
    # The exact sum never exceeds 1, but float accumulation can overshoot by
    # an ulp (0.1 + 0.2 + 0.7 > 1); clamp so the result stays a legal weight.
    links = [(s, u, min(w, 1.0)) for (s, u), w in sorted(weights.items())]
    return build_crossmap(a.source_taxonomy, b.target_taxonomy, links)


def invert(crossmap: Crossmap) -> Crossmap:
    """Reverse a bijective crosswalk, swapping the taxonomies.

    Only defined when every weight is 1 and every target receives exactly one
    link: split weights are shares of *source* mass and carry no meaning in
    the reverse direction, so anything short of a bijection is rejected.
    ``invert(invert(c))`` reproduces ``c`` exactly.
    """
    for source in crossmap.source_categories:
        if crossmap.out_degree(source) > 1:
            raise NotBijective("split", source)
    for target in crossmap.target_categories:
        if crossmap.in_degree(target) > 1:
            raise NotBijective("aggregate", target)
    reversed_links = tuple(Link(l.target, l.source, 1.0) for l in crossmap.links)
    return Crossmap(crossmap.target_taxonomy, crossmap.source_taxonomy, reversed_links)


def apply_chain(chain: MultiStepChain, series: IndexedSeries) -> IndexedSeries:
    """Apply every step of a chain in sequence.

    Equivalent (within floating-point tolerance) to applying the composition
    of all steps at once. Intermediate outputs are always fully covered by the
    next step, so no mass is lost mid-chain.
    """
    current = series
    for step in chain.steps:
        current = apply(step, current)
    return current


def harmonise(inputs: Iterable[tuple[str, Crossmap, IndexedSeries]]) -> HarmonisedPanel:
    """Transform several (unit, crossmap, series) sources into one panel.

    All crossmaps must share the same target taxonomy. Each series is applied
    strictly; errors are tagged with the offending unit. Rows come out in
    input order, then key ascending within each unit.
    """
    items = list(inputs)
    if not items:
        raise CrossmapError("harmonise needs at least one (unit, crossmap, series) input")

    target_taxonomy = items[0][1].target_taxonomy
    seen_units: set[str] = set()
    rows: list[PanelRow] = []
    for unit, crossmap, series in items:
        if unit in seen_units:
            raise DuplicateUnit(unit)
        seen_units.add(unit)
        if crossmap.target_taxonomy != target_taxonomy:
            raise TargetTaxonomyMismatch(unit, target_taxonomy, crossmap.target_taxonomy)
        try:
            transformed = apply(crossmap, series)
        except CrossmapError as err:
            raise err.for_unit(unit)
        for key in sorted(transformed.entries):
            rows.append(PanelRow(unit, key, transformed.entries[key]))
    return HarmonisedPanel(target_taxonomy, tuple(rows))
