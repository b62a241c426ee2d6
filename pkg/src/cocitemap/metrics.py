"""Group-level measures: cohesion, efficiency, overlaps, lifecycle statistics,
multidisciplinarity and category rankings."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cocitation import CoCitationNetwork, node_max_weight
from .corpus import CorpusStore
from .timeline import GroupState, Timeline

DEFAULT_DECAY = 0.23
MULTIDISCIPLINARY = "multidisciplinary sciences"


@dataclass
class CitationGraph:
    """Directed citations citing -> cited, deduplicated.

    ``multiplicity`` keeps the raw reference counts; ``year`` is None for
    papers whose publication year is unknown.
    """

    out: dict[int, frozenset]
    inc: dict[int, frozenset]
    year: dict[int, int | None]
    multiplicity: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], years: Mapping | None = None) -> "CitationGraph":
        out, inc = defaultdict(set), defaultdict(set)
        mult: Counter = Counter()
        for i, j in edges:
            out[i].add(j)
            inc[j].add(i)
            mult[(i, j)] += 1
        return cls({k: frozenset(v) for k, v in out.items()},
                   {k: frozenset(v) for k, v in inc.items()},
                   dict(years or {}), dict(mult))

    @classmethod
    def from_store(cls, store: CorpusStore) -> "CitationGraph":
        edges = []
        for i, pid in enumerate(store.ids):
            for ref, m in store.records[pid].refs:
                edges.extend([(i, store.dense[ref])] * m)
        return cls.from_edges(edges, {i: store[i].year for i in range(len(store))})

    def cites(self, i) -> frozenset:
        return self.out.get(i, frozenset())

    def cited_by(self, j) -> frozenset:
        return self.inc.get(j, frozenset())


def cohesion(members: Iterable, cg: CitationGraph) -> float:
    """Fraction of ordered member pairs (i, j), i != j, where i cites j."""
    group = frozenset(members)
    n = len(group)
    if n < 2:
        raise ValueError("cohesion needs at least two members")
    links = sum(len((cg.cites(i) & group) - {i}) for i in group)
    return links / (n * (n - 1))


@dataclass
class EfficiencyDetail:
    value: float
    citers: int
    skipped_unknown_year: int
    skipped_later: int


def efficiency_detail(members: Iterable, year: int, cg: CitationGraph,
                      decay: float = DEFAULT_DECAY) -> EfficiencyDetail:
    group = frozenset(members)
    if not group:
        raise ValueError("efficiency of an empty group")
    citers = set()
    for j in group:
        citers.update(cg.cited_by(j))
    citers -= group
    total = 0.0
    used = unknown = later = 0
    for i in sorted(citers):
        ti = cg.year.get(i)
        if ti is None:
            unknown += 1
            continue
        if ti > year:
            later += 1
            continue
        total += math.exp(-decay * (year - ti))
        used += 1
    return EfficiencyDetail(total / len(group), used, unknown, later)


def efficiency(members: Iterable, year: int, cg: CitationGraph,
               decay: float = DEFAULT_DECAY) -> float:
    """Time-discounted count of outside papers citing the group, per member.

    Every paper outside the group that cites at least one member and was
    published no later than ``year`` adds exp(-decay * (year - t_i)) once.
    Citers with unknown year are skipped (see :func:`efficiency_detail`).
    """
    return efficiency_detail(members, year, cg, decay).value


def overlap_stats(communities: Sequence[Iterable]) -> list[tuple[int, float]]:
    """(total overlap, relative total overlap) per community of one year."""
    comms = [frozenset(c) for c in communities]
    count = Counter(n for c in comms for n in c)
    out = []
    for c in comms:
        shared = sum(1 for n in c if count[n] > 1)
        out.append((shared, shared / len(c) if c else 0.0))
    return out


@dataclass
class GroupMetrics:
    timeline_id: int
    year: int
    size: int
    cohesion: float
    efficiency: float
    total_overlap: int
    relative_total_overlap: float


def group_metrics(timelines: Sequence[Timeline], cg: CitationGraph,
                  decay: float = DEFAULT_DECAY) -> tuple[list[GroupMetrics], dict]:
    """Metrics for every group state, plus diagnostics tallies."""
    by_year: dict[int, list[GroupState]] = defaultdict(list)
    for tl in timelines:
        for st in tl.states.values():
            by_year[st.year].append(st)
    diag = Counter()
    rows = []
    for year in sorted(by_year):
        states = sorted(by_year[year], key=lambda s: s.timeline_id)
        ov = overlap_stats([s.members for s in states])
        for st, (tot, rel) in zip(states, ov):
            eff = efficiency_detail(st.members, year, cg, decay)
            diag["efficiency_skipped_unknown_year"] += eff.skipped_unknown_year
            diag["efficiency_skipped_later"] += eff.skipped_later
            coh = cohesion(st.members, cg) if st.size >= 2 else 0.0
            rows.append(GroupMetrics(st.timeline_id, year, st.size, coh, eff.value, tot, rel))
    rows.sort(key=lambda r: (r.timeline_id, r.year))
    return rows, dict(diag)


# -- binning ------------------------------------------------------------------

def log2_bin(x: float) -> int:
    """Index j of the exponential bin [2**j, 2**(j+1)) holding ``x`` (x > 0)."""
    return math.floor(math.log2(x))


def linear_bin(x: float, n_bins: int = 10, lo: float = 0.0, hi: float = 1.0) -> int:
    if x >= hi:
        return n_bins - 1
    return max(0, int((x - lo) / (hi - lo) * n_bins))


def binned_curve(xs: Sequence[float], ys: Sequence[float]) -> list[tuple[float, float, int, float, float]]:
    """Mean and standard deviation of ``ys`` in exponential bins of ``xs``.

    Rows: (bin low, bin high, count, mean, std); population std.
    """
    bins = defaultdict(list)
    for x, y in zip(xs, ys):
        bins[log2_bin(x)].append(y)
    out = []
    for j in sorted(bins):
        v = np.asarray(bins[j], dtype=float)
        out.append((2.0 ** j, 2.0 ** (j + 1), len(v), float(v.mean()), float(v.std())))
    return out


def exp_histogram(values: Sequence[float]) -> list[tuple[float, float, int, float]]:
    """Counts in exponential bins, with the probability density per bin.

    Zero values are reported in a separate (0, 0) row.
    """
    vals = list(values)
    if not vals:
        return []
    zeros = sum(1 for v in vals if v == 0)
    counts = Counter(log2_bin(v) for v in vals if v > 0)
    n = len(vals)
    rows = [(0.0, 0.0, zeros, 0.0)] if zeros else []
    for j in sorted(counts):
        lo, hi = 2.0 ** j, 2.0 ** (j + 1)
        rows.append((lo, hi, counts[j], counts[j] / (n * (hi - lo))))
    return rows


def linear_histogram(values: Sequence[float], n_bins: int = 10, lo: float = 0.0,
                     hi: float = 1.0) -> list[tuple[float, float, int]]:
    counts = Counter(linear_bin(v, n_bins, lo, hi) for v in values)
    width = (hi - lo) / n_bins
    if not counts:
        return []
    return [(lo + i * width, lo + (i + 1) * width, counts.get(i, 0)) for i in range(n_bins)]


@dataclass
class LifecycleStats:
    lifespan_hist: dict[int, int]
    size_hist: list
    overlapping_size_hist: list
    total_overlap_hist: dict[int, int]
    relative_overlap_hist: list
    efficiency_hist: list
    cohesion_hist: list
    size_vs_lifespan: list
    size_vs_cohesion: list


def lifecycle_stats(timelines: Sequence[Timeline], metrics: Sequence[GroupMetrics]) -> LifecycleStats:
    """Histograms and binned curves over all timelines and group states.

    Sizes and efficiencies use exponential bins; cohesion and relative
    overlap use ten equal-width bins on [0, 1]. The size-lifespan curve
    pairs each state's size with its timeline's lifespan.
    """
    lifespan_hist = dict(sorted(Counter(tl.lifespan for tl in timelines).items()))
    life = {tl.id: tl.lifespan for tl in timelines}
    sizes = [m.size for m in metrics]
    overl = [m for m in metrics if m.total_overlap > 0]
    with_life = [m for m in metrics if m.timeline_id in life]
    return LifecycleStats(
        lifespan_hist=lifespan_hist,
        size_hist=exp_histogram(sizes),
        overlapping_size_hist=exp_histogram([m.size for m in overl]),
        total_overlap_hist=dict(sorted(Counter(m.total_overlap for m in overl).items())),
        relative_overlap_hist=linear_histogram([m.relative_total_overlap for m in overl]),
        efficiency_hist=exp_histogram([m.efficiency for m in metrics]),
        cohesion_hist=linear_histogram([m.cohesion for m in metrics]),
        size_vs_lifespan=binned_curve([m.size for m in with_life],
                                      [life[m.timeline_id] for m in with_life]),
        size_vs_cohesion=binned_curve(sizes, [m.cohesion for m in metrics]),
    )


# -- categories ---------------------------------------------------------------

def category_ratio(store: CorpusStore, nodes: Iterable[int], category: str = MULTIDISCIPLINARY) -> float | None:
    """Share of ``nodes`` carrying ``category``, among nodes with any category.

    None when no node has category information.
    """
    n = hit = 0
    for i in nodes:
        cats = store[i].categories
        if not cats:
            continue
        n += 1
        hit += category in cats
    return hit / n if n else None


SELECTORS = ("all_published_up_to_t", "cocited_at_w*", "group_members")


def multidisciplinarity_ratio(store: CorpusStore, selector: str, years: Iterable[int] | None = None, *,
                              networks: Mapping[int, CoCitationNetwork] | None = None,
                              thresholds: Mapping[int, int] | None = None,
                              communities: Mapping[int, Iterable[Iterable[int]]] | None = None,
                              category: str = MULTIDISCIPLINARY) -> dict[int, float]:
    """Yearly multidisciplinarity ratio of one paper set.

    ``all_published_up_to_t``: papers published in or before t.
    ``cocited_at_w*``: nodes of year t's network with a link of weight >= w*(t).
    ``group_members``: members of any community of year t.
    Years whose set has no categorised paper are omitted.
    """
    if selector not in SELECTORS:
        raise ValueError(f"unknown selector {selector!r}")
    years = list(store.years if years is None else years)
    out = {}
    if selector == "all_published_up_to_t":
        dated = sorted((r.year, store.dense[r.id]) for r in store if r.year is not None and not r.cited_only)
        pos = 0
        n = hit = 0
        for y in sorted(years):
            while pos < len(dated) and dated[pos][0] <= y:
                cats = store[dated[pos][1]].categories
                if cats:
                    n += 1
                    hit += category in cats
                pos += 1
            if n:
                out[y] = hit / n
        return out
    for y in years:
        if selector == "cocited_at_w*":
            if not networks or y not in networks or not thresholds or y not in thresholds:
                continue
            w = thresholds[y]
            nodes = [n for n, mw in node_max_weight(networks[y]).items() if mw >= w]
        else:
            if not communities or y not in communities:
                continue
            nodes = set().union(*map(set, communities[y])) if communities[y] else set()
        r = category_ratio(store, nodes, category)
        if r is not None:
            out[y] = r
    return out


def multidisciplinarity_vs_threshold(net: CoCitationNetwork, store: CorpusStore,
                                     category: str = MULTIDISCIPLINARY) -> list[tuple[int, float]]:
    """Ratio among nodes having a link of weight >= w, for w = 1..max weight."""
    best = node_max_weight(net)
    curve = []
    for w in range(1, net.max_weight + 1):
        r = category_ratio(store, (n for n, mw in best.items() if mw >= w), category)
        if r is None:
            continue
        curve.append((w, r))
    return curve


def top_categories(timeline: Timeline, store: CorpusStore, min_share: float = 0.10,
                   min_presence: float = 0.70, limit: int = 3) -> list[tuple[str, float]]:
    """Most relevant categories of a timeline with their mean yearly share.

    A category qualifies if it is on more than ``min_share`` of the group's
    papers in more than ``min_presence`` of the group's years.
    """
    shares: dict[str, list[float]] = defaultdict(list)
    years = timeline.years
    for y in years:
        members = timeline.states[y].members
        counts = Counter(c for n in members for c in store[n].categories)
        for c, k in counts.items():
            shares[c].append(k / len(members))
    ranked = []
    for c, vals in shares.items():
        present = sum(1 for v in vals if v > min_share)
        if present / len(years) > min_presence:
            ranked.append((c, sum(vals) / len(years)))
    ranked.sort(key=lambda cv: (-cv[1], cv[0]))
    return ranked[:limit]


def category_group_ratio(communities: Mapping[int, Sequence[Iterable[int]]], store: CorpusStore,
                         min_share: float = 0.10, min_ratio: float = 0.10) -> dict[str, dict[int, float]]:
    """Per year, the share of groups in which a category is on more than
    ``min_share`` of the members; categories above ``min_ratio`` in some year."""
    out: dict[str, dict[int, float]] = defaultdict(dict)
    for y in sorted(communities):
        groups = [list(g) for g in communities[y]]
        if not groups:
            continue
        tally = Counter()
        for g in groups:
            counts = Counter(c for n in g for c in store[n].categories)
            tally.update(c for c, k in counts.items() if k / len(g) > min_share)
        for c, k in tally.items():
            out[c][y] = k / len(groups)
    return {c: v for c, v in sorted(out.items()) if max(v.values()) > min_ratio}
