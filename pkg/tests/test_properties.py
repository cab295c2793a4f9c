from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from xmap import (
    Crossmap,
    DuplicateLink,
    IndexedSeries,
    Link,
    WeightSumViolation,
    apply,
    build_crossmap,
    compose,
    invert,
    read_edge_list,
    read_series,
    summarize,
    write_edge_list,
    write_series,
    write_summary_json,
)
from helpers import oracle_relabel_group_sum

# label characters: anything except the four banned by the CSV shape,
# surrogates, and labels that trim away to nothing
label_text = st.text(
    alphabet=st.characters(blacklist_characters=',\r\n"', blacklist_categories=("Cs",)),
    min_size=1,
    max_size=12,
).map(str.strip).filter(bool)

label_lists = st.lists(label_text, min_size=1, max_size=6, unique=True)


@st.composite
def crossmaps(draw) -> Crossmap:
    sources = draw(label_lists)
    targets = draw(label_lists)
    links: list[tuple[str, str, float]] = []
    for source in sources:
        fan = draw(st.integers(1, min(3, len(targets))))
        heads = draw(st.permutations(targets))[:fan]
        if fan == 1:
            links.append((source, heads[0], 1.0))
        else:
            shares = draw(st.lists(st.integers(1, 9), min_size=fan, max_size=fan))
            total = sum(shares)
            links.extend((source, head, share / total) for head, share in zip(heads, shares))
    return build_crossmap("alpha", "beta", links)


@st.composite
def crosswalks(draw) -> Crossmap:
    sources = draw(label_lists)
    targets = draw(label_lists)
    links = [(source, draw(st.sampled_from(targets)), 1.0) for source in sources]
    return build_crossmap("alpha", "beta", links)


@st.composite
def series_for(draw, crossmap: Crossmap, integer: bool = False) -> IndexedSeries:
    if integer:
        value = st.integers(-1_000_000, 1_000_000).map(float)
    else:
        value = st.floats(min_value=-1e9, max_value=1e9, allow_nan=False, allow_infinity=False)
    entries = {label: draw(value) for label in crossmap.source_categories}
    return IndexedSeries(crossmap.source_taxonomy, entries)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_mass_is_conserved(data):
    crossmap = data.draw(crossmaps())
    series = data.draw(series_for(crossmap))
    out = apply(crossmap, series)
    in_total = series.total()
    abs_in = sum(abs(v) for v in series.entries.values())
    assert abs(out.total() - in_total) <= 1e-9 * abs_in


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_crosswalk_apply_is_exact_relabel_group_sum(data):
    walk = data.draw(crosswalks())
    series = data.draw(series_for(walk, integer=True))
    mapping = {link.source: link.target for link in walk.links}
    expected = oracle_relabel_group_sum(mapping, dict(series.entries))
    out = apply(walk, series)
    assert dict(out.entries) == expected  # bitwise: integer sums are exact


@settings(max_examples=100, deadline=None)
@given(crossmaps())
def test_edge_list_round_trip(crossmap):
    text = write_edge_list(crossmap)
    back = read_edge_list(text, crossmap.source_taxonomy, crossmap.target_taxonomy)
    assert [l.pair for l in back.links] == [l.pair for l in crossmap.links]
    for mine, theirs in zip(crossmap.links, back.links):
        assert abs(mine.weight - theirs.weight) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(crossmaps())
def test_summary_json_parses_back(crossmap):
    summary = summarize(crossmap)
    parsed = json.loads(write_summary_json(summary))
    assert parsed["n_sources"] == summary.n_sources
    assert parsed["n_targets"] == summary.n_targets
    assert parsed["n_links"] == summary.n_links
    assert parsed["n_splits"] == summary.n_splits
    assert parsed["n_aggregates"] == summary.n_aggregates
    assert parsed["max_in_degree"] == summary.max_in_degree
    assert parsed["is_crosswalk"] == summary.is_crosswalk
    assert [tuple(item) for item in parsed["most_synthetic_targets"]] == list(
        summary.most_synthetic_targets
    )


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_series_round_trip(data):
    crossmap = data.draw(crossmaps())
    series = data.draw(series_for(crossmap))
    assert read_series(write_series(series), series.taxonomy) == series


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_single_weight_perturbation_is_rejected(data):
    crossmap = data.draw(crossmaps())
    index = data.draw(st.integers(0, len(crossmap.links) - 1))
    links = list(crossmap.links)
    victim = links[index]
    delta = 1e-3 if victim.weight + 1e-3 <= 1.0 else -1e-3
    links[index] = Link(victim.source, victim.target, victim.weight + delta)
    with pytest.raises(WeightSumViolation) as caught:
        build_crossmap("alpha", "beta", links)
    assert caught.value.source == victim.source


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_duplicated_link_is_rejected(data):
    crossmap = data.draw(crossmaps())
    index = data.draw(st.integers(0, len(crossmap.links) - 1))
    victim = crossmap.links[index]
    with pytest.raises(DuplicateLink):
        build_crossmap("alpha", "beta", list(crossmap.links) + [victim])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_functor_law_small(data):
    first = data.draw(crossmaps())
    # second stage covers every category the first stage can reach
    mids = first.target_categories
    finals = data.draw(label_lists)
    links = []
    for mid in mids:
        fan = data.draw(st.integers(1, min(3, len(finals))))
        heads = data.draw(st.permutations(list(finals)))[:fan]
        if fan == 1:
            links.append((mid, heads[0], 1.0))
        else:
            shares = data.draw(st.lists(st.integers(1, 9), min_size=fan, max_size=fan))
            total = sum(shares)
            links.extend((mid, head, share / total) for head, share in zip(heads, shares))
    second = build_crossmap("beta", "gamma", links)
    entries = {
        label: float(data.draw(st.integers(0, 1_000_000)))
        for label in first.source_categories
    }
    series = IndexedSeries("alpha", entries)

    fused = apply(compose(first, second), series)
    chained = apply(second, apply(first, series))
    assert set(fused.entries) == set(chained.entries)
    for label in fused.entries:
        assert math.isclose(fused.entries[label], chained.entries[label], rel_tol=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_invert_is_an_involution_on_bijections(data):
    codes = data.draw(label_lists)
    others = data.draw(st.permutations([f"x{code}" for code in codes]))
    walk = build_crossmap("left", "right", [(a, b, 1.0) for a, b in zip(codes, others)])
    assert invert(invert(walk)) == walk
    round_tripped = apply(invert(walk), apply(walk, IndexedSeries("left", {codes[0]: 7.0})))
    assert round_tripped.entries[codes[0]] == 7.0
