"""Joining yearly communities into timelines of evolving groups.

Two adjacent years are compared through the communities of their merged
(union) network: every yearly community sits inside one merged community,
and inside each merged community the year-t / year-t+1 pairs are matched
greedily by decreasing Jaccard overlap.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cocitation import BinaryNetwork
from .cpm import CommunitySet, k_clique_communities


@dataclass(frozen=True)
class GroupState:
    year: int
    members: frozenset
    timeline_id: int
    source_index: int | None = None

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class Timeline:
    id: int
    states: dict[int, GroupState] = field(default_factory=dict)

    @property
    def birth_year(self) -> int:
        return min(self.states)

    @property
    def death_year(self) -> int:
        return max(self.states)

    @property
    def lifespan(self) -> int:
        return self.death_year - self.birth_year + 1

    @property
    def years(self) -> list[int]:
        return sorted(self.states)

    def members(self, year: int) -> frozenset:
        st = self.states.get(year)
        return st.members if st is not None else frozenset()

    def is_contiguous(self) -> bool:
        return len(self.states) == self.lifespan


@dataclass(frozen=True)
class TransitionEdge:
    from_timeline: int
    to_timeline: int
    year: int
    moved: frozenset

    @property
    def size(self) -> int:
        return len(self.moved)


@dataclass(frozen=True)
class MatchStep:
    group: int
    a: int
    b: int
    jaccard: float


@dataclass
class MatchResult:
    matches: list[tuple[int, int, float]]
    births: list[int]
    deaths: list[int]
    # merged community index -> (year-t module indices, year-t+1 module indices)
    groups: dict[int, tuple[list[int], list[int]]]
    log: list[MatchStep]
    # modules not contained in any merged community (approximate cliques only)
    violations: list[tuple[str, int]] = field(default_factory=list)


@dataclass(frozen=True)
class Event:
    kind: str  # "split" or "merge"
    year: int  # earlier year of the transition t -> t+1
    sources: tuple[int, ...]
    targets: tuple[int, ...]


@dataclass
class TimelineSet:
    timelines: list[Timeline]
    matches: dict[int, MatchResult]
    events: list[Event]

    def by_id(self) -> dict[int, Timeline]:
        return {tl.id: tl for tl in self.timelines}

    @property
    def states(self) -> list[GroupState]:
        return [st for tl in self.timelines for _, st in sorted(tl.states.items())]


def merge_networks(net_t: BinaryNetwork, net_t1: BinaryNetwork) -> BinaryNetwork:
    """Union of two binary networks (nodes and edges)."""
    return BinaryNetwork(net_t.year, net_t.nodes | net_t1.nodes, net_t.edges | net_t1.edges)


def jaccard(a: Iterable, b: Iterable) -> float:
    a, b = set(a), set(b)
    union = len(a | b)
    if union == 0:
        raise ValueError("Jaccard overlap of two empty sets is undefined")
    return len(a & b) / union


def _assign(modules: Sequence[frozenset], merged: Sequence[frozenset], side: str,
            violations: list) -> list[int | None]:
    by_node = defaultdict(list)
    for mi, m in enumerate(merged):
        for n in m:
            by_node[n].append(mi)
    out = []
    for i, mod in enumerate(modules):
        hits = defaultdict(int)
        for n in mod:
            for mi in by_node.get(n, ()):
                hits[mi] += 1
        containing = sorted(mi for mi, h in hits.items() if h == len(mod))
        if containing:
            out.append(containing[0])
            continue
        violations.append((side, i))
        out.append(min(hits, key=lambda mi: (-hits[mi], mi)) if hits else None)
    return out


def match_adjacent(comms_t: Sequence[frozenset], comms_t1: Sequence[frozenset],
                   merged_comms: Sequence[frozenset]) -> MatchResult:
    """One-to-one matching of year-t modules to year-t+1 modules.

    Within each merged community the unassigned pair with the highest
    positive Jaccard overlap is matched, repeatedly. Ties go to the smaller
    year-t index, then the smaller year-t+1 index.
    """
    comms_t, comms_t1, merged = list(comms_t), list(comms_t1), list(merged_comms)
    if not comms_t or not comms_t1:
        return MatchResult([], list(range(len(comms_t1))), list(range(len(comms_t))), {}, [])
    violations: list = []
    ga = _assign(comms_t, merged, "t", violations)
    gb = _assign(comms_t1, merged, "t+1", violations)

    groups: dict[int, tuple[list[int], list[int]]] = {}
    lone = len(merged)
    for i, g in enumerate(ga):
        if g is None:
            g = ga[i] = lone
            lone += 1
        groups.setdefault(g, ([], []))[0].append(i)
    for j, g in enumerate(gb):
        if g is None:
            g = gb[j] = lone
            lone += 1
        groups.setdefault(g, ([], []))[1].append(j)

    matches = []
    log = []
    used_a, used_b = set(), set()
    for g in sorted(groups):
        As, Bs = groups[g]
        pairs = []
        for a in As:
            for b in Bs:
                if comms_t[a] & comms_t1[b]:
                    pairs.append((-jaccard(comms_t[a], comms_t1[b]), a, b))
        pairs.sort()
        for negj, a, b in pairs:
            if a in used_a or b in used_b:
                continue
            used_a.add(a)
            used_b.add(b)
            matches.append((a, b, -negj))
            log.append(MatchStep(g, a, b, -negj))
    matches.sort()
    deaths = [i for i in range(len(comms_t)) if i not in used_a]
    births = [j for j in range(len(comms_t1)) if j not in used_b]
    return MatchResult(matches, births, deaths, dict(sorted(groups.items())), log, violations)


def audit_matches(result: MatchResult, comms_t: Sequence[frozenset],
                  comms_t1: Sequence[frozenset]) -> list[str]:
    """Check the greedy log: each accepted pair must be at least as good as every
    pair still unassigned in its merged community at that moment.

    Returns a list of problems (empty when the log is consistent).
    """
    problems = []
    seen_a, seen_b = set(), set()
    for step in result.log:
        As, Bs = result.groups[step.group]
        if step.a in seen_a or step.b in seen_b:
            problems.append(f"module reused in step {step}")
        for a in As:
            if a in seen_a:
                continue
            for b in Bs:
                if b in seen_b or not comms_t[a] & comms_t1[b]:
                    continue
                if jaccard(comms_t[a], comms_t1[b]) > step.jaccard:
                    problems.append(f"step {step} skipped better pair ({a}, {b})")
        if step.jaccard <= 0:
            problems.append(f"non-positive overlap in step {step}")
        seen_a.add(step.a)
        seen_b.add(step.b)
    return problems


def _as_list(c) -> list[frozenset]:
    if c is None:
        return []
    if isinstance(c, CommunitySet):
        return list(c.communities)
    return [frozenset(x) for x in c]


def build_timelines(yearly_comms: Mapping[int, CommunitySet | Sequence[frozenset]],
                    nets: Mapping[int, BinaryNetwork], k: int = 4,
                    budget: int | None = None) -> TimelineSet:
    """Chain adjacent-year matches into timelines.

    Years missing from ``yearly_comms`` inside the covered range count as
    years without communities. Timeline ids are assigned from 1 in order of
    birth year, then community index.
    """
    if not yearly_comms:
        return TimelineSet([], {}, [])
    years = list(range(min(yearly_comms), max(yearly_comms) + 1))
    comms = {y: _as_list(yearly_comms.get(y)) for y in years}

    timelines: list[Timeline] = []
    current: dict[int, int] = {}  # community index in current year -> timeline index

    def start(year, idx):
        tl = Timeline(len(timelines) + 1)
        tl.states[year] = GroupState(year, comms[year][idx], tl.id, idx)
        timelines.append(tl)
        return len(timelines) - 1

    for i in range(len(comms[years[0]])):
        current[i] = start(years[0], i)

    matches: dict[int, MatchResult] = {}
    events: list[Event] = []
    for t in years[:-1]:
        t1 = t + 1
        ct, ct1 = comms[t], comms[t1]
        if ct and ct1:
            empty = BinaryNetwork(t, frozenset(), frozenset())
            merged = merge_networks(nets.get(t, empty), nets.get(t1, empty))
            merged_comms = k_clique_communities(merged, k, budget).communities
        else:
            merged_comms = []
        res = match_adjacent(ct, ct1, merged_comms)
        matches[t] = res

        nxt: dict[int, int] = {}
        for a, b, _ in res.matches:
            ti = current[a]
            tl = timelines[ti]
            tl.states[t1] = GroupState(t1, ct1[b], tl.id, b)
            nxt[b] = ti
        for b in res.births:
            nxt[b] = start(t1, b)
        events.extend(_events(t, res, ct, ct1, current, nxt, timelines))
        current = nxt
    return TimelineSet(timelines, matches, events)


def _events(t, res: MatchResult, ct, ct1, cur, nxt, timelines) -> list[Event]:
    """Split: a year-t module overlaps several year-t+1 modules, one of them newly
    born. Merge: a year-t+1 module overlaps several year-t modules, one of which
    dies."""
    births, deaths = set(res.births), set(res.deaths)
    overlaps_a = defaultdict(list)
    overlaps_b = defaultdict(list)
    for As, Bs in res.groups.values():
        for a in As:
            for b in Bs:
                if ct[a] & ct1[b]:
                    overlaps_a[a].append(b)
                    overlaps_b[b].append(a)
    out = []
    tid = lambda mapping, i: timelines[mapping[i]].id  # noqa: E731
    for a in sorted(overlaps_a):
        bs = sorted(overlaps_a[a])
        if len(bs) >= 2 and births.intersection(bs):
            out.append(Event("split", t, (tid(cur, a),), tuple(tid(nxt, b) for b in bs)))
    for b in sorted(overlaps_b):
        as_ = sorted(overlaps_b[b])
        if len(as_) >= 2 and deaths.intersection(as_):
            out.append(Event("merge", t, tuple(tid(cur, a) for a in as_), (tid(nxt, b),)))
    return out


def detect_transitions(timelines: Iterable[Timeline], strict: bool = False) -> list[TransitionEdge]:
    """Papers found in timeline T1 in year t and in a different timeline T2 in t+1.

    With ``strict`` a paper that is still in T1 at t+1 is not counted as moved.
    """
    timelines = list(timelines)
    at_year: dict[int, dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
    for tl in timelines:
        for y, st in tl.states.items():
            for n in st.members:
                at_year[y][n].append(tl.id)
    edges = []
    for tl in sorted(timelines, key=lambda x: x.id):
        for t in tl.years:
            moved = defaultdict(set)
            nxt = at_year.get(t + 1)
            if not nxt:
                continue
            stay = tl.members(t + 1) if strict else frozenset()
            for n in tl.states[t].members:
                if n in stay:
                    continue
                for other in nxt.get(n, ()):
                    if other != tl.id:
                        moved[other].add(n)
            for other in sorted(moved):
                edges.append(TransitionEdge(tl.id, other, t, frozenset(moved[other])))
    edges.sort(key=lambda e: (e.year, e.from_timeline, e.to_timeline))
    return edges
