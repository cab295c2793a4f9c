"""Fixtures, random generators, and independently coded oracles.

The oracles deliberately avoid the library's own code paths (different data
structures, different iteration orders) so agreement is evidence, not
tautology.
"""

from __future__ import annotations

import random

from xmap import Crossmap, IndexedSeries, LayoutPlan, build_crossmap

# Five-link recoding between the pre-1990 and post-1990 country lists:
# one split (BLX), one aggregation (DEU), one self-loop (AUS).
COUNTRY_LINKS = (
    ("BLX", "BEL", 0.5),
    ("BLX", "LUX", 0.5),
    ("E.GER", "DEU", 1.0),
    ("W.GER", "DEU", 1.0),
    ("AUS", "AUS", 1.0),
)
COUNTRY_EDGE_TEXT = (
    "from,to,weight\n"
    "BLX,BEL,0.5\n"
    "BLX,LUX,0.5\n"
    "E.GER,DEU,1\n"
    "W.GER,DEU,1\n"
    "AUS,AUS,1\n"
)
COUNTRY_VALUES = {"BLX": 10.0, "E.GER": 5.0, "W.GER": 7.0, "AUS": 3.0}
COUNTRY_EXPECTED = {"BEL": 5.0, "LUX": 5.0, "DEU": 12.0, "AUS": 3.0}

ISO_COLUMNS = ("country", "ISO2", "ISO3", "ISONumeric")
ISO_TABLE_TEXT = (
    "country,ISO2,ISO3,ISONumeric\n"
    "Afghanistan,AF,AFG,004\n"
    "Albania,AL,ALB,008\n"
    "Algeria,DZ,DZA,012\n"
    "American Samoa,AS,ASM,016\n"
    "Andorra,AD,AND,020\n"
)


def country_fixture() -> Crossmap:
    return build_crossmap("old", "new", COUNTRY_LINKS)


def country_series() -> IndexedSeries:
    return IndexedSeries("old", COUNTRY_VALUES)


# ── random instances ──────────────────────────────────────────────────────


def random_crossmap(rng: random.Random, max_sources: int = 50, max_targets: int = 50) -> Crossmap:
    """Valid crossmap with a mix of one-to-one links, splits, and aggregates.

    Split weights are integer ratios share/total, so each source's weights
    sum to 1 at float precision and every weight is at least 1/36 (safely
    above the 9-digit text format's resolution).
    """
    n_sources = rng.randint(1, max_sources)
    n_targets = rng.randint(1, max_targets)
    sources = [f"S{i:03d}" for i in range(n_sources)]
    targets = [f"T{i:03d}" for i in range(n_targets)]
    links: list[tuple[str, str, float]] = []
    for label in sources:
        fan = rng.randint(1, min(4, n_targets))
        heads = rng.sample(targets, fan)
        if fan == 1:
            links.append((label, heads[0], 1.0))
        else:
            shares = [rng.randint(1, 9) for _ in range(fan)]
            total = sum(shares)
            links.extend((label, head, share / total) for head, share in zip(heads, shares))
    return build_crossmap("alpha", "beta", links)


def random_crosswalk(rng: random.Random, max_sources: int = 50, max_targets: int = 50) -> Crossmap:
    """Unit-weight crossmap: every source has exactly one link (many-to-one allowed)."""
    n_sources = rng.randint(1, max_sources)
    n_targets = rng.randint(1, max_targets)
    sources = [f"A{i:03d}" for i in range(n_sources)]
    targets = [f"B{i:03d}" for i in range(n_targets)]
    links = [(label, rng.choice(targets), 1.0) for label in sources]
    return build_crossmap("alpha", "beta", links)


def random_composable_pair(rng: random.Random) -> tuple[Crossmap, Crossmap]:
    """Pair (a, b) where every intermediate category of a is covered by b."""
    mids = [f"M{i:02d}" for i in range(rng.randint(1, 10))]
    n_sources = rng.randint(1, 12)
    n_finals = rng.randint(1, 12)
    finals = [f"U{i:02d}" for i in range(n_finals)]

    links_a: list[tuple[str, str, float]] = []
    for i in range(n_sources):
        label = f"S{i:02d}"
        fan = rng.randint(1, min(3, len(mids)))
        heads = rng.sample(mids, fan)
        if fan == 1:
            links_a.append((label, heads[0], 1.0))
        else:
            shares = [rng.randint(1, 9) for _ in range(fan)]
            total = sum(shares)
            links_a.extend((label, head, share / total) for head, share in zip(heads, shares))

    links_b: list[tuple[str, str, float]] = []
    for label in mids:  # every intermediate gets outgoing links: full coverage
        fan = rng.randint(1, min(3, n_finals))
        heads = rng.sample(finals, fan)
        if fan == 1:
            links_b.append((label, heads[0], 1.0))
        else:
            shares = [rng.randint(1, 9) for _ in range(fan)]
            total = sum(shares)
            links_b.extend((label, head, share / total) for head, share in zip(heads, shares))

    return (
        build_crossmap("alpha", "mid", links_a),
        build_crossmap("mid", "omega", links_b),
    )


def random_series(rng: random.Random, crossmap: Crossmap, integer: bool = False) -> IndexedSeries:
    """Series covering every source of the crossmap."""
    entries = {
        label: float(rng.randint(-1_000_000, 1_000_000)) if integer else rng.uniform(-1e6, 1e6)
        for label in crossmap.source_categories
    }
    return IndexedSeries(crossmap.source_taxonomy, entries)


# ── oracles ───────────────────────────────────────────────────────────────


def oracle_expand_group_sum(
    links: tuple[tuple[str, str, float], ...], values: dict[str, float]
) -> dict[str, float]:
    """Expand each value row along its links into weighted rows, then group-sum."""
    expanded: list[tuple[str, float]] = []
    for source, target, weight in links:
        expanded.append((target, weight * values.get(source, 0.0)))
    grouped: dict[str, float] = {}
    for target, contribution in expanded:
        grouped[target] = grouped.get(target, 0.0) + contribution
    return grouped


def oracle_relabel_group_sum(mapping: dict[str, str], values: dict[str, float]) -> dict[str, float]:
    """Crosswalk semantics: rename each key by lookup, then sum per new name."""
    out: dict[str, float] = {}
    for key, value in values.items():
        new_key = mapping[key]
        out[new_key] = out.get(new_key, 0.0) + value
    return out


def oracle_matrix_apply(crossmap: Crossmap, series: IndexedSeries) -> dict[str, float]:
    """Dense matrix-vector product, numpy's summation order."""
    import numpy as np

    sources = sorted(crossmap.source_categories)
    targets = sorted(crossmap.target_categories)
    source_pos = {label: i for i, label in enumerate(sources)}
    target_pos = {label: i for i, label in enumerate(targets)}
    matrix = np.zeros((len(sources), len(targets)))
    for link in crossmap.links:
        matrix[source_pos[link.source], target_pos[link.target]] = link.weight
    vector = np.array([series.entries.get(label, 0.0) for label in sources])
    return dict(zip(targets, (vector @ matrix).tolist()))


def oracle_crossings(
    tail_rows: dict[str, int], head_rows: dict[str, int], pairs: list[tuple[str, str]]
) -> int:
    """Brute-force pairwise count of straight-line crossings between two columns."""
    spans = [(tail_rows[source], head_rows[target]) for source, target in pairs]
    count = 0
    for i in range(len(spans)):
        for j in range(i + 1, len(spans)):
            if (spans[i][0] - spans[j][0]) * (spans[i][1] - spans[j][1]) < 0:
                count += 1
    return count


def plan_crossings(plan: LayoutPlan) -> int:
    """Crossing count of a layout plan, summed over adjacent column gaps."""
    total = 0
    for gap in range(len(plan.layers) - 1):
        spans = [(edge.tail[1], edge.head[1]) for edge in plan.edges if edge.tail[0] == gap]
        for i in range(len(spans)):
            for j in range(i + 1, len(spans)):
                if (spans[i][0] - spans[j][0]) * (spans[i][1] - spans[j][1]) < 0:
                    total += 1
    return total
