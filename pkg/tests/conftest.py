import os
import random

import pytest
from hypothesis import HealthCheck, settings

from cocitemap.cocitation import BinaryNetwork, build_yearly_network, threshold
from cocitemap.corpus import parse_corpus
from cocitemap.cpm import k_clique_communities
from cocitemap.synthetic import to_lines
from cocitemap.threshold_opt import scan_thresholds, select_threshold
from cocitemap.timeline import build_timelines

settings.register_profile("default", max_examples=100, deadline=None)
settings.register_profile("ci", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", max_examples=20, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_graph(rng: random.Random, n: int, p: float) -> BinaryNetwork:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return BinaryNetwork.from_edges(0, edges, range(n))


def timelines_from_records(records, k=4, criterion="ratio2"):
    """In-memory run of the build/threshold/cluster/match stages."""
    store = parse_corpus(to_lines(records))
    comms, nets = {}, {}
    for y in store.years:
        net = build_yearly_network(store, y)
        if not net.edges:
            continue
        w = select_threshold(scan_thresholds(net, k), criterion)
        nets[y] = threshold(net, w)
        comms[y] = k_clique_communities(nets[y], k)
    return store, build_timelines(comms, nets, k)


def names(store, nodes):
    """Opaque ids of dense nodes, as a frozenset."""
    return frozenset(store.ids[n] for n in nodes)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    from _acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
