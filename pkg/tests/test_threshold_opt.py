import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cocitemap.cocitation import CoCitationNetwork
from cocitemap.synthetic import two_scale_network
from cocitemap.threshold_opt import (NoCommunitiesError, ScanEntry, ThresholdScan, read_scan, scan_thresholds,
                                     select_threshold, write_scan)


def entry(w, sizes):
    sizes = sorted(sizes, reverse=True)
    return ScanEntry(w, len(sizes), sizes, sizes[0] if sizes else 0, sizes[1] if len(sizes) > 1 else 0,
                     sum(sizes))


def scan(*entries):
    return ThresholdScan(0, 4, list(entries))


def clique_edges(nodes, w):
    return {e: w for e in itertools.combinations(sorted(nodes), 2)}


def test_all_unit_weights_single_entry():
    net = CoCitationNetwork.from_edges(0, clique_edges(range(6), 1))
    s = scan_thresholds(net, 4)
    assert [e.w for e in s.entries] == [1]
    assert s.entries[0].size_list == [6]


def test_k5_weight_two():
    net = CoCitationNetwork.from_edges(0, clique_edges(range(5), 2))
    s = scan_thresholds(net, 4, w_range=range(1, 4))
    assert [(e.w, e.size_list) for e in s.entries] == [(1, [5]), (2, [5]), (3, [])]


def test_three_tier_clustered_nodes_decrease():
    edges = {}
    edges.update(clique_edges(range(0, 12), 1))
    edges.update(clique_edges(range(0, 8), 2))
    edges.update(clique_edges(range(0, 5), 3))
    s = scan_thresholds(CoCitationNetwork.from_edges(0, edges), 4)
    clustered = [e.clustered_nodes for e in s.entries]
    assert clustered == [12, 8, 5]


def test_ratio_rule_examples():
    assert select_threshold(scan(entry(2, [100, 4]), entry(3, [12, 9, 5]))) == 3
    assert select_threshold(scan(entry(1, [6, 5]))) == 1


def test_single_community_everywhere_falls_back_to_smallest_w():
    assert select_threshold(scan(entry(1, []), entry(2, [9]), entry(3, [7]))) == 2


def test_entropy_fallback_prefers_varied_sizes():
    s = scan(entry(1, [40, 4]), entry(2, [30, 6, 5]), entry(3, [20, 4]))
    assert select_threshold(s) == 2
    assert select_threshold(s, "entropy") == 2


def test_no_communities_raises():
    with pytest.raises(NoCommunitiesError, match="no communities at any threshold"):
        select_threshold(scan(entry(1, []), entry(2, [])))
    with pytest.raises(ValueError):
        select_threshold(scan())
    with pytest.raises(ValueError):
        select_threshold(scan(entry(1, [5])), "median")


def test_empty_network_scan_is_empty():
    assert scan_thresholds(CoCitationNetwork.from_edges(0, {}), 4).entries == []
    with pytest.raises(ValueError):
        scan_thresholds(CoCitationNetwork.from_edges(0, {}), 4, w_range=[])


size_lists = st.lists(st.integers(4, 60), max_size=6)


@given(st.lists(size_lists, min_size=1, max_size=8), st.sampled_from(["ratio2", "entropy"]))
def test_selection_stays_in_range_and_is_deterministic(per_w, criterion):
    s = scan(*(entry(w, sizes) for w, sizes in enumerate(per_w, 1)))
    if not any(per_w):
        with pytest.raises(NoCommunitiesError):
            select_threshold(s, criterion)
        return
    w = select_threshold(s, criterion)
    assert w in {e.w for e in s.entries}
    assert s.entry(w).n_communities > 0
    assert select_threshold(s, criterion) == w


@given(st.lists(st.integers(5, 10), min_size=2, max_size=5), st.integers(1, 3), st.integers(1, 3),
       st.integers(0, 1000))
def test_two_scale_split_point(sizes, inter, gap, seed):
    net = two_scale_network(sizes, inter + gap, inter, seed)
    assert select_threshold(scan_thresholds(net, 4)) == inter + 1


def test_scan_file_round_trip(tmp_path):
    net = two_scale_network([6, 6, 5], 4, 2, seed=1)
    s = scan_thresholds(net, 4)
    write_scan(s, tmp_path / "s.tsv")
    again = read_scan(tmp_path / "s.tsv", s.year, s.k)
    assert again.entries == s.entries
