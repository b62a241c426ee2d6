import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import names, timelines_from_records

from cocitemap.cocitation import BinaryNetwork
from cocitemap.synthetic import long_timeline_corpus, records_from_states
from cocitemap.timeline import (GroupState, Timeline, audit_matches, build_timelines, detect_transitions,
                                jaccard, match_adjacent, merge_networks)


def net_of(year, modules):
    edges = [e for m in modules for e in itertools.combinations(sorted(m), 2)]
    return BinaryNetwork.from_edges(year, edges)


def run(yearly):
    """Timelines for modules given per year; each module is planted as a clique."""
    comms = {y: [frozenset(m) for m in ms] for y, ms in yearly.items()}
    nets = {y: net_of(y, ms) for y, ms in comms.items()}
    return build_timelines(comms, nets, 4)


def test_merge_networks():
    a = BinaryNetwork.from_edges(0, [(1, 2), (2, 3)])
    assert merge_networks(a, a) == a
    b = BinaryNetwork.from_edges(1, [(7, 8)])
    assert merge_networks(a, b).nodes == {1, 2, 3, 7, 8}
    c = BinaryNetwork.from_edges(1, [(2, 3), (3, 4)])
    assert merge_networks(a, c).edges == {(1, 2), (2, 3), (3, 4)}


def test_jaccard():
    assert jaccard({1, 2}, {1, 2}) == 1
    assert jaccard({1}, {2}) == 0
    assert jaccard({1, 2, 3}, {2, 3, 4}) == 0.5
    with pytest.raises(ValueError):
        jaccard(set(), set())


def test_identical_module_single_match():
    m = frozenset(range(5))
    res = match_adjacent([m], [m], [m])
    assert res.matches == [(0, 0, 1.0)]
    assert res.births == res.deaths == []


def test_disjoint_module_dies_and_other_is_born():
    a, b = frozenset(range(5)), frozenset(range(10, 15))
    res = match_adjacent([a], [b], [a, b])
    assert res.matches == []
    assert res.deaths == [0]
    assert res.births == [0]


def test_greedy_prefers_higher_overlap():
    b1 = frozenset(range(10))
    a1 = frozenset(range(6))          # 6 / 10
    a2 = frozenset({7, 8, 9})         # 3 / 10
    res = match_adjacent([a1, a2], [b1], [a1 | a2 | b1])
    assert res.matches == [(0, 0, 0.6)]
    assert res.deaths == [1]
    assert audit_matches(res, [a1, a2], [b1]) == []


def test_audit_catches_a_bad_log():
    b1 = frozenset(range(10))
    a1, a2 = frozenset(range(6)), frozenset({7, 8, 9})
    res = match_adjacent([a1, a2], [b1], [a1 | a2 | b1])
    res.log[0] = type(res.log[0])(res.log[0].group, 1, 0, 0.3)
    assert audit_matches(res, [a1, a2], [b1])


def test_stable_module():
    m = set(range(5))
    ts = run({1: [m], 2: [m], 3: [m]})
    assert [(tl.birth_year, tl.death_year, tl.lifespan) for tl in ts.timelines] == [(1, 3, 3)]


def test_death():
    m, other = set(range(5)), set(range(20, 25))
    ts = run({1: [m, other], 2: [m, other], 3: [other]})
    life = {min(tl.members(tl.birth_year)): (tl.birth_year, tl.death_year) for tl in ts.timelines}
    assert life == {0: (1, 2), 20: (1, 3)}


def test_split_gives_continuation_and_birth():
    big = set(range(12))
    ts = run({1: [big], 2: [set(range(8)), set(range(7, 12))]})
    tl1, tl2 = ts.timelines
    assert tl1.id == 1 and tl2.id == 2
    assert tl1.states[2].members == frozenset(range(8))
    assert tl2.birth_year == 2
    assert [e.kind for e in ts.events] == ["split"]


def test_gap_year_ends_timelines():
    m = set(range(5))
    ts = run({1: [m], 2: [], 3: [m]})
    assert [(tl.birth_year, tl.death_year) for tl in ts.timelines] == [(1, 1), (3, 3)]


def test_planted_lifespans_exact():
    store, ts = timelines_from_records(long_timeline_corpus())
    assert sorted(tl.lifespan for tl in ts.timelines) == [13, 15]


def test_transition_examples():
    t1 = Timeline(1, {5: GroupState(5, frozenset({1, 2, 3}), 1), 6: GroupState(6, frozenset({1, 2}), 1)})
    t2 = Timeline(2, {5: GroupState(5, frozenset({7, 8}), 2), 6: GroupState(6, frozenset({3, 7, 8}), 2)})
    edges = detect_transitions([t1, t2])
    assert [(e.from_timeline, e.to_timeline, e.year, e.size) for e in edges] == [(1, 2, 5, 1)]
    t3 = Timeline(3, {5: GroupState(5, frozenset({9}), 3), 6: GroupState(6, frozenset({9}), 3)})
    assert detect_transitions([t1, t3]) == []


def test_strict_moves_excludes_papers_still_in_source():
    t1 = Timeline(1, {5: GroupState(5, frozenset({1, 2, 3}), 1), 6: GroupState(6, frozenset({1, 2, 3}), 1)})
    t2 = Timeline(2, {5: GroupState(5, frozenset({7, 8}), 2), 6: GroupState(6, frozenset({3, 7, 8}), 2)})
    assert [e.size for e in detect_transitions([t1, t2])] == [1]
    assert detect_transitions([t1, t2], strict=True) == []


def test_transition_between_corpora_ids():
    states = {2000: [["A1", "A2", "A3", "A4", "M1"], ["B1", "B2", "B3", "B4"]],
              2001: [["A1", "A2", "A3", "A4"], ["B1", "B2", "B3", "B4", "M1"]]}
    store, ts = timelines_from_records(records_from_states(states))
    (edge,) = detect_transitions(ts.timelines)
    assert names(store, edge.moved) == {"M1"}


modules = st.lists(st.frozensets(st.integers(0, 30), min_size=4, max_size=9), max_size=4)


@given(st.lists(modules, min_size=2, max_size=5))
def test_matching_invariants(per_year):
    yearly = {2000 + i: ms for i, ms in enumerate(per_year)}
    ts = run(yearly)
    for t, res in ts.matches.items():
        ct, ct1 = [frozenset(m) for m in yearly[t]], [frozenset(m) for m in yearly[t + 1]]
        a_used = [a for a, _, _ in res.matches]
        b_used = [b for _, b, _ in res.matches]
        assert len(a_used) == len(set(a_used)) and len(b_used) == len(set(b_used))
        assert sorted(a_used + res.deaths) == list(range(len(ct)))
        assert sorted(b_used + res.births) == list(range(len(ct1)))
        assert audit_matches(res, ct, ct1) == []
        assert res.violations == []
    for tl in ts.timelines:
        assert tl.is_contiguous()
    # every module of every year belongs to exactly one timeline
    placed = sorted((y, st_.source_index) for tl in ts.timelines for y, st_ in tl.states.items())
    assert placed == sorted((y, i) for y, ms in yearly.items() for i in range(len(ms)))
    assert [tl.id for tl in ts.timelines] == list(range(1, len(ts.timelines) + 1))
